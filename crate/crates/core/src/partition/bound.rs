use serde::Serialize;

use super::{enumeration_guard, kernel_histogram, KernelHistogram, PartitionParams};
use crate::code::{build_code, Axis, StabilizerCode};
use crate::error::{Error, Result};
use crate::lattice::{build_lattice, CellComplex, LatticeSpec};

/// Slack below this is a violation; the bound is attained exactly by some
/// surfaces, so rounding can push their slack marginally negative.
pub const SLACK_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoundParams {
    pub epsilon1: f64,
    pub epsilon2: f64,
}

impl BoundParams {
    pub fn new(epsilon1: f64, epsilon2: f64) -> Result<Self> {
        for e in [epsilon1, epsilon2] {
            if !(e > 0.0 && e < 1.0) {
                return Err(Error::InvalidParameter(format!(
                    "epsilon must lie in (0, 1), got {e}"
                )));
            }
        }
        Ok(Self { epsilon1, epsilon2 })
    }

    /// Slack of `A_c + n_i - 2 n_i^c >= ε₁ A_c + ε₂ n_i`.
    pub fn slack(&self, counts: [u32; 3], sizes: [u32; 3], axis: usize) -> f64 {
        let a = counts.iter().sum::<u32>() as f64;
        let n = sizes[axis] as f64;
        let nc = counts[axis] as f64;
        (a + n - 2.0 * nc) - (self.epsilon1 * a + self.epsilon2 * n)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub params: BoundParams,
    /// `n_i / F` for each face type.
    pub type_fractions: [f64; 3],
    pub checks: u64,
    pub violations: u64,
    pub min_slack: f64,
    /// Per-type face counts of a surface attaining the minimal slack.
    pub tightest_counts: [u32; 3],
    pub tightest_axis: Axis,
}

impl BoundReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }

    pub fn from_histogram(h: &KernelHistogram, params: BoundParams) -> Self {
        let sizes = h.type_sizes;
        let total: u32 = sizes.iter().sum();
        let mut checks = 0;
        let mut violations = 0;
        let mut tightest = (f64::INFINITY, [0; 3], Axis::X);
        for (counts, n) in h.surfaces() {
            for axis in Axis::ALL {
                let s = params.slack(counts, sizes, axis.index());
                checks += n;
                if s < -SLACK_TOLERANCE {
                    violations += n;
                }
                if s < tightest.0 {
                    tightest = (s, counts, axis);
                }
            }
        }
        Self {
            params,
            type_fractions: sizes.map(|n| n as f64 / total as f64),
            checks,
            violations,
            min_slack: tightest.0,
            tightest_counts: tightest.1,
            tightest_axis: tightest.2,
        }
    }
}

/// Checks the cross-term inequality for every closed surface (including the
/// empty one) and every face type.
pub fn verify_cross_term_bound(
    c: &CellComplex,
    code: &StabilizerCode,
    params: BoundParams,
) -> Result<BoundReport> {
    Ok(BoundReport::from_histogram(
        &kernel_histogram(c, code)?,
        params,
    ))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DominanceRow {
    pub size: usize,
    pub beta_j: f64,
    pub surface_part: f64,
    pub pure_type_part: f64,
    pub cross_part: f64,
    /// `(pure_type_part + cross_part) / surface_part`.
    pub ratio: f64,
}

/// Non-surface weight relative to the surface sum at each size and βJ.
/// Size 1 uses the multigraph complex.
pub fn dominance_report(sizes: &[usize], beta_js: &[f64]) -> Result<Vec<DominanceRow>> {
    let mut rows = Vec::new();
    for &size in sizes {
        let spec = if size == 1 {
            LatticeSpec::multigraph(1)?
        } else {
            LatticeSpec::new(size as i64)?
        };
        let c = build_lattice(spec);
        enumeration_guard(&c)?;
        let code = build_code(&c)?;
        let h = kernel_histogram(&c, &code)?;
        for &bj in beta_js {
            let r = h.reduced_sum(PartitionParams::new(bj)?);
            rows.push(DominanceRow {
                size,
                beta_j: bj,
                surface_part: r.surface_part,
                pure_type_part: r.pure_type_part,
                cross_part: r.cross_part,
                ratio: (r.pure_type_part + r.cross_part) / r.surface_part,
            });
        }
    }
    Ok(rows)
}

/// Largest `c` with `ratio <= α^{c L³}` across the rows at `beta_j`.
pub fn envelope_exponent(rows: &[DominanceRow], beta_j: f64) -> Option<f64> {
    let ln_alpha = beta_j.tanh().ln();
    rows.iter()
        .filter(|r| r.beta_j == beta_j)
        .map(|r| r.ratio.ln() / ((r.size as f64).powi(3) * ln_alpha))
        .reduce(f64::min)
}
