use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::instance::{Directionality, Instance, Link, PowerAssignment, SinrParams};
use crate::metric::{EuclideanMetric, Metric, NodeId};

/// `n` gadgets on the line, each two unit links sharing both endpoints'
/// positions: senders of gadget `i` (1-based) at `2ni`, receivers at
/// `2ni + 1`. Uses `beta = 2`, `N = 0` and uniform power, so the two links of
/// a gadget block each other while other gadgets barely matter.
///
/// Link `2(i-1) + j` is the `j`-th link of gadget `i`; the pairs are attached
/// as gadget metadata.
pub fn gen_gadget(n: usize, alpha: f64) -> Result<Instance> {
    if n < 2 {
        return Err(Error::BadParams(format!("gadget family needs n >= 2, got {n}")));
    }
    if !(alpha > 1.0 && alpha.is_finite()) {
        return Err(Error::BadParams(format!("gadget family needs alpha > 1, got {alpha}")));
    }
    let mut points = BTreeMap::new();
    let mut links = Vec::with_capacity(2 * n);
    let mut gadgets = Vec::with_capacity(n);
    for i in 1..=n {
        let x = (2 * n * i) as f64;
        for _ in 0..2 {
            let id = links.len();
            let (s, r) = (NodeId(2 * id as u32), NodeId(2 * id as u32 + 1));
            points.insert(s, vec![x]);
            points.insert(r, vec![x + 1.0]);
            links.push(Link::new(id, s, r));
        }
        gadgets.push([2 * (i - 1), 2 * (i - 1) + 1]);
    }
    Instance::new(
        Metric::Euclidean(EuclideanMetric::new(1, points)?),
        links,
        SinrParams::new(alpha, 2.0, 0.0)?,
        PowerAssignment::Uniform(1.0),
        Directionality::Unidirectional,
    )?
    .with_gadgets(gadgets)
}
