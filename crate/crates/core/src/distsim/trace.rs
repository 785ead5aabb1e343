use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::LinkId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SlotKind {
    Data,
    Ack,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlotRecord {
    /// 1-based slot index.
    pub slot: u64,
    pub kind: SlotKind,
    pub transmitters: Vec<LinkId>,
    pub successes: Vec<LinkId>,
}

/// What happened to one link over the run. Slots are `None` when the event
/// never took place.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct LinkOutcome {
    pub data_slot: Option<u64>,
    pub ack_slot: Option<u64>,
    /// Slot after which the sender stopped: the data slot with free
    /// acknowledgements, the ack slot otherwise.
    pub completion: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimTrace {
    pub slots: Vec<SlotRecord>,
    pub links: Vec<LinkOutcome>,
    /// Last completion over all links; `None` when the run was truncated.
    pub completion_slot: Option<u64>,
    pub truncated: bool,
    pub slots_run: u64,
    /// Active-gadget count before each slot `t = 1..=slots_run`, present
    /// when the instance carries gadget metadata.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub active_gadgets: Option<Vec<usize>>,
}

impl SimTrace {
    /// Turns a truncated run into [`Error::MaxSlotsExceeded`].
    pub fn check_complete(&self) -> Result<u64> {
        self.completion_slot.ok_or(Error::MaxSlotsExceeded(self.slots_run))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("traces always serialize")
    }

    /// Compact per-slot CSV: `slot,kind,transmitters,successes` with id
    /// lists joined by `;`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["slot", "kind", "transmitters", "successes"])?;
        let join = |ids: &[LinkId]| ids.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(";");
        for r in &self.slots {
            let kind = match r.kind {
                SlotKind::Data => "data",
                SlotKind::Ack => "ack",
            };
            w.write_record([r.slot.to_string(), kind.into(), join(&r.transmitters), join(&r.successes)])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// First data success of each gadget, if any.
fn first_success(trace: &SimTrace, gadgets: &[[LinkId; 2]]) -> Result<Vec<Option<u64>>> {
    gadgets
        .iter()
        .map(|g| {
            let mut first = None;
            for &id in g {
                let o = trace.links.get(id).ok_or(Error::UnknownLink(id))?;
                first = match (first, o.data_slot) {
                    (Some(a), Some(b)) => Some(u64::min(a, b)),
                    (a, b) => a.or(b),
                };
            }
            Ok(first)
        })
        .collect()
}

/// `(t, a(t))` for `t = 0..=slots_run + 1`, where a gadget counts as active
/// at `t` when neither of its links had a data success in a slot before `t`.
pub fn active_gadget_curve(trace: &SimTrace, gadgets: Option<&[[LinkId; 2]]>) -> Result<Vec<(u64, usize)>> {
    let gadgets = gadgets.ok_or(Error::MetadataMissing)?;
    let firsts = first_success(trace, gadgets)?;
    Ok((0..=trace.slots_run + 1).map(|t| (t, firsts.iter().filter(|f| f.is_none_or(|s| s >= t)).count())).collect())
}

/// Per-slot survival of active gadgets over data slots: how many
/// (gadget, slot) pairs began active and how many of those stayed active.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SurvivalCounts {
    pub active: u64,
    pub survived: u64,
}

impl SurvivalCounts {
    pub fn add(&mut self, other: SurvivalCounts) {
        self.active += other.active;
        self.survived += other.survived;
    }

    pub fn frequency(&self) -> f64 {
        self.survived as f64 / self.active as f64
    }

    /// Binomial standard error of [`Self::frequency`].
    pub fn std_err(&self) -> f64 {
        let f = self.frequency();
        (f * (1.0 - f) / self.active as f64).sqrt()
    }
}

pub fn gadget_survival(trace: &SimTrace, gadgets: Option<&[[LinkId; 2]]>) -> Result<SurvivalCounts> {
    let gadgets = gadgets.ok_or(Error::MetadataMissing)?;
    let firsts = first_success(trace, gadgets)?;
    let mut counts = SurvivalCounts::default();
    for rec in trace.slots.iter().filter(|r| r.kind == SlotKind::Data) {
        for f in &firsts {
            match f {
                Some(s) if *s < rec.slot => {}
                Some(s) if *s == rec.slot => counts.active += 1,
                _ => {
                    counts.active += 1;
                    counts.survived += 1;
                }
            }
        }
    }
    Ok(counts)
}
