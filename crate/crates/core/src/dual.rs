//! Dual (acknowledgement) link sets: every link reversed, with dual power
//! `P*_u = gamma * len_u^alpha / P_u`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::instance::{Directionality, Instance, PowerAssignment};

/// Global normalisation for dual power. With noise, the smallest gamma for
/// which every dual constant `c*_u` is no larger than `c_u`, i.e.
/// `max_u P_u^2 / len_u^alpha`. Without noise the constants coincide for any
/// gamma and 1 is used.
pub fn dual_gamma(inst: &Instance) -> f64 {
    let p = inst.params();
    if p.noise == 0.0 {
        return 1.0;
    }
    inst.derived_all().iter().map(|d| d.power * d.power / d.length.powf(p.alpha)).fold(0.0, f64::max)
}

/// Reverses every link and switches to dual power.
pub fn dual_instance(inst: &Instance) -> Result<Instance> {
    if inst.directionality() != Directionality::Unidirectional {
        return Err(Error::BadParams("dual instance is defined for unidirectional links".into()));
    }
    let gamma = dual_gamma(inst);
    let power = match inst.power() {
        PowerAssignment::Uniform(p) => PowerAssignment::Linear(gamma / p),
        PowerAssignment::Linear(k) => PowerAssignment::Uniform(gamma / k),
        PowerAssignment::Table(_) => {
            let alpha = inst.params().alpha;
            PowerAssignment::Table(
                inst.derived_all()
                    .iter()
                    .map(|d| (d.link, gamma * d.length.powf(alpha) / d.power))
                    .collect::<BTreeMap<_, _>>(),
            )
        }
    };
    reversed_with_power(inst, power)
}

/// Reverses every link keeping the given power assignment. With the
/// original assignment this is the "same power" dual used for uniform power.
pub fn reversed_with_power(inst: &Instance, power: PowerAssignment) -> Result<Instance> {
    let links = inst.links().iter().map(|l| l.reversed()).collect();
    let dual = Instance::new(inst.metric().clone(), links, *inst.params(), power, inst.directionality())?;
    match inst.gadgets() {
        Some(g) => dual.with_gadgets(g.to_vec()),
        None => Ok(dual),
    }
}
