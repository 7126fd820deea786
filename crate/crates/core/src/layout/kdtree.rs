//! Static 2-d tree for k-nearest-neighbor queries over edge midpoints.

const LEAF_SIZE: usize = 12;

/// Points are stored in tree order; node `[lo, hi)` splits at
/// `mid = lo + (hi - lo) / 2` on axis `depth % 2`.
pub struct KdTree {
    points: Vec<[f64; 2]>,
    ids: Vec<usize>,
}

impl KdTree {
    pub fn new(points: Vec<[f64; 2]>) -> Self {
        let mut order: Vec<usize> = (0..points.len()).collect();
        build(&points, &mut order, 0);
        Self {
            points: order.iter().map(|&i| points[i]).collect(),
            ids: order,
        }
    }

    /// The `k` points nearest to `q`, as `(squared distance, index)` sorted
    /// by distance then index.
    #[cfg(test)]
    pub fn nearest(&self, q: [f64; 2], k: usize) -> Vec<(f64, usize)> {
        let mut out = Vec::with_capacity(k);
        self.nearest_into(q, k, &mut out);
        out.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        out
    }

    /// The `k` nearest points in no particular order, written into a reusable
    /// buffer. Among equidistant points the smaller index wins.
    pub fn nearest_into(&self, q: [f64; 2], k: usize, out: &mut Vec<(f64, usize)>) {
        out.clear();
        let k = k.min(self.points.len());
        if k == 0 {
            return;
        }
        let mut best = Best {
            heap: Vec::with_capacity(k),
            k,
        };
        self.search(q, 0, self.points.len(), 0, 0.0, [0.0; 2], &mut best);
        out.extend(best.heap.into_iter().map(unpack));
    }

    /// `rd` is the squared distance from `q` to the node's cell, `off` its
    /// per-axis components.
    #[allow(clippy::too_many_arguments)]
    fn search(
        &self,
        q: [f64; 2],
        lo: usize,
        hi: usize,
        depth: usize,
        rd: f64,
        off: [f64; 2],
        best: &mut Best,
    ) {
        if hi - lo <= LEAF_SIZE {
            for (p, &id) in self.points[lo..hi].iter().zip(&self.ids[lo..hi]) {
                best.offer(sq_dist(p, &q), id);
            }
            return;
        }
        let axis = depth % 2;
        let mid = lo + (hi - lo) / 2;
        let split = self.points[mid];
        let diff = q[axis] - split[axis];
        let (near, far) = if diff <= 0.0 {
            ((lo, mid), (mid + 1, hi))
        } else {
            ((mid + 1, hi), (lo, mid))
        };
        self.search(q, near.0, near.1, depth + 1, rd, off, best);
        best.offer(sq_dist(&split, &q), self.ids[mid]);
        let far_rd = rd - off[axis] * off[axis] + diff * diff;
        if far_rd <= best.bound() {
            let mut far_off = off;
            far_off[axis] = diff;
            self.search(q, far.0, far.1, depth + 1, far_rd, far_off, best);
        }
    }
}

#[inline(always)]
fn sq_dist(p: &[f64; 2], q: &[f64; 2]) -> f64 {
    let (dx, dy) = (p[0] - q[0], p[1] - q[1]);
    dx * dx + dy * dy
}

/// `(distance, id)` as one integer with the same order: non-negative floats
/// compare like their bit patterns.
#[inline(always)]
fn pack(d: f64, id: usize) -> u128 {
    ((d.to_bits() as u128) << 64) | id as u128
}

fn unpack(key: u128) -> (f64, usize) {
    (f64::from_bits((key >> 64) as u64), key as u64 as usize)
}

/// Max-heap of the best `k` packed candidates seen so far.
struct Best {
    heap: Vec<u128>,
    k: usize,
}

impl Best {
    /// Squared distance beyond which nothing can enter.
    #[inline(always)]
    fn bound(&self) -> f64 {
        if self.heap.len() < self.k {
            f64::INFINITY
        } else {
            f64::from_bits((self.heap[0] >> 64) as u64)
        }
    }

    #[inline(always)]
    fn offer(&mut self, d: f64, id: usize) {
        let key = pack(d, id);
        let h = &mut self.heap;
        if h.len() < self.k {
            h.push(key);
            let mut i = h.len() - 1;
            while i > 0 {
                let parent = (i - 1) / 2;
                if h[parent] >= key {
                    break;
                }
                h[i] = h[parent];
                i = parent;
            }
            h[i] = key;
        } else if key < h[0] {
            let n = h.len();
            let mut i = 0;
            loop {
                let left = 2 * i + 1;
                if left >= n {
                    break;
                }
                let right = left + 1;
                let child = if right < n && h[right] > h[left] {
                    right
                } else {
                    left
                };
                if h[child] <= key {
                    break;
                }
                h[i] = h[child];
                i = child;
            }
            h[i] = key;
        }
    }
}

fn build(points: &[[f64; 2]], order: &mut [usize], depth: usize) {
    if order.len() <= LEAF_SIZE {
        return;
    }
    let axis = depth % 2;
    let mid = order.len() / 2;
    order.select_nth_unstable_by(mid, |&a, &b| {
        points[a][axis].total_cmp(&points[b][axis]).then(a.cmp(&b))
    });
    let (left, right) = order.split_at_mut(mid);
    build(points, left, depth + 1);
    build(points, &mut right[1..], depth + 1);
}
