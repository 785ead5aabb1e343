//! Hub-tree family whose maximum average affectance grows like `log n`
//! while two slots always suffice.
//!
//! Link `i` (0..=n) has length `(i+1)^(1/alpha)`. The sender of link 0 is
//! the hub; the receiver of link `i >= 1` hangs off the hub at distance
//! `c (i+1)^(2/alpha)` with its sender a further `len_i` down the same
//! branch. A copy of the whole tree scaled by `epsilon` is attached to the
//! hub by an edge of length `epsilon`. All distances are shortest paths in
//! that tree.

use crate::affectance::is_feasible;
use crate::error::{Error, Result};
use crate::instance::{Directionality, Instance, Link, LinkId, PowerAssignment, SinrParams};
use crate::metric::{MatrixMetric, Metric, NodeId};

/// Binary search stops once the bracket on `c` is this narrow.
const C_SEARCH_RESOLUTION: f64 = 1e-3;
/// Safety factor applied to the smallest feasible `c`.
const C_MARGIN: f64 = 1.1;

#[derive(Debug, Clone)]
pub struct HubTree {
    pub instance: Instance,
    pub n: usize,
    pub c: f64,
    pub epsilon: f64,
}

impl HubTree {
    /// Ids of the large copy `L` (link 0 first).
    pub fn large(&self) -> Vec<LinkId> {
        (0..=self.n).collect()
    }

    /// Ids of the scaled copy `L'`.
    pub fn small(&self) -> Vec<LinkId> {
        (self.n + 1..2 * (self.n + 1)).collect()
    }

    /// `d(s_0, r_i)` in the large copy.
    pub fn hub_distance(&self, i: usize) -> f64 {
        self.c * ((i + 1) as f64).powf(2.0 / self.instance.params().alpha)
    }
}

/// Rooted weighted tree; distances are summed along the actual path so a
/// parent-child distance is exactly the edge weight.
struct Tree {
    parent: Vec<Option<(usize, f64)>>,
}

impl Tree {
    fn new() -> Self {
        Self { parent: vec![None] }
    }

    fn attach(&mut self, parent: usize, weight: f64) -> usize {
        self.parent.push(Some((parent, weight)));
        self.parent.len() - 1
    }

    /// `(ancestor, distance)` pairs from `x` up to the root.
    fn climb(&self, x: usize) -> Vec<(usize, f64)> {
        let mut out = vec![(x, 0.0)];
        let mut cur = x;
        let mut acc = 0.0;
        while let Some((p, w)) = self.parent[cur] {
            acc += w;
            out.push((p, acc));
            cur = p;
        }
        out
    }

    fn distances(&self) -> Vec<Vec<f64>> {
        let n = self.parent.len();
        let paths: Vec<_> = (0..n).map(|x| self.climb(x)).collect();
        let mut d = vec![vec![0.0; n]; n];
        for a in 0..n {
            for b in (a + 1)..n {
                let dist = paths[a]
                    .iter()
                    .find_map(|&(anc, da)| paths[b].iter().find(|&&(x, _)| x == anc).map(|&(_, db)| da + db))
                    .expect("tree is connected");
                d[a][b] = dist;
                d[b][a] = dist;
            }
        }
        d
    }
}

/// Builds the tree for one copy hanging from `root`, scaled by `scale`.
/// Returns `(sender, receiver)` tree nodes for links 0..=n.
fn add_copy(tree: &mut Tree, root: usize, n: usize, alpha: f64, c: f64, scale: f64) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(n + 1);
    out.push((root, tree.attach(root, scale)));
    for i in 1..=n {
        let k = (i + 1) as f64;
        let r = tree.attach(root, scale * c * k.powf(2.0 / alpha));
        let s = tree.attach(r, scale * k.powf(1.0 / alpha));
        out.push((s, r));
    }
    out
}

fn build(n: usize, alpha: f64, c: f64, epsilon: Option<f64>) -> Result<Instance> {
    let mut tree = Tree::new();
    let mut ends = add_copy(&mut tree, 0, n, alpha, c, 1.0);
    if let Some(eps) = epsilon {
        let sub_hub = tree.attach(0, eps);
        ends.extend(add_copy(&mut tree, sub_hub, n, alpha, c, eps));
    }
    let ids: Vec<NodeId> = (0..tree.parent.len() as u32).map(NodeId).collect();
    let metric = MatrixMetric::new_trusted(ids, tree.distances())?;
    let links =
        ends.iter().enumerate().map(|(id, &(s, r))| Link::new(id, NodeId(s as u32), NodeId(r as u32))).collect();
    Instance::new(
        Metric::Matrix(metric),
        links,
        SinrParams::new(alpha, 1.0, 0.0)?,
        PowerAssignment::Uniform(1.0),
        Directionality::Unidirectional,
    )
}

fn large_copy_feasible(n: usize, alpha: f64, c: f64) -> Result<bool> {
    let inst = build(n, alpha, c, None)?;
    let all: Vec<LinkId> = inst.link_ids().collect();
    is_feasible(&inst, &all)
}

/// Smallest `c` (to the search resolution) making the large copy feasible.
fn min_feasible_c(n: usize, alpha: f64) -> Result<f64> {
    let mut hi = 1.0;
    let mut steps = 0;
    while !large_copy_feasible(n, alpha, hi)? {
        hi *= 2.0;
        steps += 1;
        if steps > 60 {
            return Err(Error::GenerationFailed("no separation constant makes L feasible".into()));
        }
    }
    let mut lo = hi / 2.0;
    while large_copy_feasible(n, alpha, lo)? {
        hi = lo;
        lo /= 2.0;
        if lo < 1e-12 {
            return Err(Error::GenerationFailed("separation constant search diverged".into()));
        }
    }
    while hi - lo > C_SEARCH_RESOLUTION {
        let mid = 0.5 * (lo + hi);
        if large_copy_feasible(n, alpha, mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// `2(n+1)` links: the large copy `L` (ids 0..=n) and its scaled copy `L'`.
/// `c` defaults to 1.1 times the smallest value keeping `L` feasible and
/// `epsilon` to `1 / (n^2 c)`. Uses `beta = 1`, `N = 0`, uniform power.
pub fn gen_hub_tree(n: usize, alpha: f64, c: Option<f64>, epsilon: Option<f64>) -> Result<HubTree> {
    if n < 2 {
        return Err(Error::BadParams(format!("hub-tree family needs n >= 2, got {n}")));
    }
    if !(alpha > 1.0 && alpha.is_finite()) {
        return Err(Error::BadParams(format!("hub-tree family needs alpha > 1, got {alpha}")));
    }
    let c = match c {
        Some(c) if c > 0.0 && c.is_finite() => c,
        Some(c) => return Err(Error::BadParams(format!("c must be positive, got {c}"))),
        None => min_feasible_c(n, alpha)? * C_MARGIN,
    };
    let epsilon = match epsilon {
        Some(e) if e > 0.0 && e < 1.0 => e,
        Some(e) => return Err(Error::BadParams(format!("epsilon must lie in (0, 1), got {e}"))),
        None => 1.0 / ((n * n) as f64 * c),
    };
    let instance = build(n, alpha, c, Some(epsilon))?;
    Ok(HubTree { instance, n, c, epsilon })
}
