//! Model discovery from logs and import of externally mined models.

mod declare;
mod dfg;
mod ocdfg;
mod petri;
mod temporal;
mod variants;

pub use declare::{import_declare, Constraint, DeclareKind, DeclareModel};
pub use dfg::{discover_dfg, Dfg, DfgArc};
pub use ocdfg::{discover_ocdfg, Ocdfg, OcdfgArc};
pub use petri::{import_pnml, write_pnml, PetriArc, PetriNet};
pub use temporal::{discover_temporal_profile, TemporalEntry, TemporalProfile};
pub use variants::{discover_variants, VariantSet, VariantStats};

/// Running mean and sample variance (Welford).
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Moments {
    pub n: usize,
    pub mean: f64,
    m2: f64,
    sum: f64,
}

impl Moments {
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        self.sum += x;
        let delta = x - self.mean;
        self.mean += delta / self.n as f64;
        self.m2 += delta * (x - self.mean);
    }

    /// Arithmetic mean computed as sum / n, matching a plain average.
    pub fn average(&self) -> f64 {
        if self.n == 0 {
            0.0
        } else {
            self.sum / self.n as f64
        }
    }

    /// Sample standard deviation; 0 for a single observation.
    pub fn sample_std(&self) -> f64 {
        if self.n < 2 {
            0.0
        } else {
            (self.m2 / (self.n - 1) as f64).max(0.0).sqrt()
        }
    }
}
