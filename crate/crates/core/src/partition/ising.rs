use std::collections::BTreeMap;

use serde::Serialize;

use super::{check_dim, closed_surface_weights, weight_histogram, weighted_sum, PartitionParams};
use crate::code::cell_boundary_vectors;
use crate::error::{Error, Result};
use crate::lattice::{CellComplex, DualIsingGraph};
use crate::pauli::rref;

/// `-½ ln tanh βJ`, evaluated as `artanh(e^{-2βJ})`.
pub fn dual_coupling(beta_j: f64) -> Result<f64> {
    if !(beta_j.is_finite() && beta_j > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "coupling must be positive and finite, got {beta_j}"
        )));
    }
    Ok((-2.0 * beta_j).exp().atanh())
}

/// Inverse of [`dual_coupling`]; the map is an involution.
pub fn map_to_quantum_coupling(dual_beta_j: f64) -> Result<f64> {
    dual_coupling(dual_beta_j)
}

/// The coupling equal to its own dual, `½ ln(1 + √2)`.
pub fn self_dual_coupling() -> f64 {
    0.5 * (1.0 + 2f64.sqrt()).ln()
}

/// Number of spin configurations per value of `Σ_bonds s_a s_b`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IsingHistogram {
    pub num_sites: usize,
    pub num_bonds: usize,
    pub counts: BTreeMap<i64, u64>,
}

impl IsingHistogram {
    /// `Σ_config e^{K (S - shift)}`.
    pub fn shifted_sum(&self, coupling: f64, shift: i64) -> f64 {
        let mut s = super::CompensatedSum::default();
        for (&b, &n) in &self.counts {
            s.add(n as f64 * (coupling * (b - shift) as f64).exp());
        }
        s.value()
    }

    pub fn partition_function(&self, coupling: f64) -> f64 {
        self.shifted_sum(coupling, 0)
    }

    /// Equilibrium mean of `E = -Σ s_a s_b`.
    pub fn mean_energy(&self, coupling: f64) -> f64 {
        let top = *self.counts.keys().next_back().unwrap_or(&0);
        let (mut num, mut den) = (0.0, 0.0);
        for (&b, &n) in &self.counts {
            let w = n as f64 * (coupling * (b - top) as f64).exp();
            num -= b as f64 * w;
            den += w;
        }
        num / den
    }
}

pub fn ising_histogram(graph: &DualIsingGraph) -> Result<IsingHistogram> {
    let n = graph.num_sites();
    check_dim("Ising configuration space", n)?;
    let others: Vec<Vec<usize>> = (0..n)
        .map(|s| {
            graph
                .neighbors(s)
                .iter()
                .copied()
                .filter(|&t| t != s)
                .collect()
        })
        .collect();
    let mut spins = vec![1i64; n];
    let mut sum = graph.num_bonds() as i64;
    let mut counts = BTreeMap::new();
    *counts.entry(sum).or_insert(0u64) += 1;
    for i in 1u64..(1u64 << n) {
        let s = i.trailing_zeros() as usize;
        let field: i64 = others[s].iter().map(|&t| spins[t]).sum();
        sum -= 2 * spins[s] * field;
        spins[s] = -spins[s];
        *counts.entry(sum).or_insert(0) += 1;
    }
    Ok(IsingHistogram {
        num_sites: n,
        num_bonds: graph.num_bonds(),
        counts,
    })
}

/// `Σ_config exp(K Σ_bonds s_a s_b)` by exhaustive enumeration.
pub fn exact_ising_sum(graph: &DualIsingGraph, coupling: f64) -> Result<f64> {
    Ok(ising_histogram(graph)?.partition_function(coupling))
}

pub fn exact_ising_mean_energy(graph: &DualIsingGraph, coupling: f64) -> Result<f64> {
    Ok(ising_histogram(graph)?.mean_energy(coupling))
}

fn trivial_weights(c: &CellComplex) -> Result<BTreeMap<u32, u64>> {
    let basis: Vec<Vec<u64>> = rref(cell_boundary_vectors(c), c.num_faces())
        .iter()
        .map(|v| v.words().to_vec())
        .collect();
    check_dim("cell-boundary space", basis.len())?;
    Ok(weight_histogram(&basis, c.num_faces().div_ceil(64)))
}

/// Σ of `α^{A_c}` over surfaces generated by cell boundaries.
pub fn trivial_sector_sum(c: &CellComplex, params: PartitionParams) -> Result<f64> {
    Ok(weighted_sum(&trivial_weights(c)?, params.alpha()))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SectorDualityRow {
    pub beta_j: f64,
    pub dual_beta_j: f64,
    pub trivial_sum: f64,
    /// `Z_Ising(K) e^{-K F} / 2`.
    pub ising_side: f64,
    pub relative_error: f64,
    pub full_sum: f64,
    /// `full_sum / trivial_sum`.
    pub sector_ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SectorDualityReport {
    pub rows: Vec<SectorDualityRow>,
    pub max_relative_error: f64,
    pub ratio_at_least_one: bool,
    /// The sector ratio falls toward 1 as βJ decreases (the dual coupling
    /// grows).
    pub ratio_monotone: bool,
}

impl SectorDualityReport {
    pub fn passed(&self, tolerance: f64) -> bool {
        self.max_relative_error <= tolerance && self.ratio_at_least_one && self.ratio_monotone
    }
}

/// Checks, at each βJ, that the cell-generated surface sum equals the dual
/// Ising partition function at `K = dual_coupling(βJ)` times `e^{-KF}/2`,
/// and reports how much the noncontractible surfaces add on top.
pub fn verify_sector_duality(c: &CellComplex, beta_js: &[f64]) -> Result<SectorDualityReport> {
    let trivial = trivial_weights(c)?;
    let full = closed_surface_weights(c)?;
    let ising = ising_histogram(&c.dual_graph())?;
    let mut betas = beta_js.to_vec();
    betas.sort_by(f64::total_cmp);
    let rows = betas
        .iter()
        .map(|&bj| {
            let p = PartitionParams::new(bj)?;
            let k = dual_coupling(bj)?;
            let trivial_sum = weighted_sum(&trivial, p.alpha());
            let ising_side = 0.5 * ising.shifted_sum(k, c.num_faces() as i64);
            let full_sum = weighted_sum(&full, p.alpha());
            Ok(SectorDualityRow {
                beta_j: bj,
                dual_beta_j: k,
                trivial_sum,
                ising_side,
                relative_error: ((trivial_sum - ising_side) / ising_side).abs(),
                full_sum,
                sector_ratio: full_sum / trivial_sum,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SectorDualityReport {
        max_relative_error: rows.iter().map(|r| r.relative_error).fold(0.0, f64::max),
        ratio_at_least_one: rows.iter().all(|r| r.sector_ratio >= 1.0),
        ratio_monotone: rows
            .windows(2)
            .all(|w| w[0].sector_ratio < w[1].sector_ratio),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{build_lattice, LatticeSpec};

    #[test]
    fn dual_coupling_values() {
        let d = dual_coupling(0.5).unwrap();
        assert!((d - (-0.5 * 0.5f64.tanh().ln())).abs() < 1e-15);
        assert!((d - 0.385_968_416_452_652).abs() < 1e-14);
        let x = self_dual_coupling();
        assert!((x - 0.440687).abs() < 1e-6);
        assert!((dual_coupling(x).unwrap() - x).abs() < 1e-15);
        assert!(dual_coupling(20.0).unwrap() < 1e-16);
        assert!(dual_coupling(0.0).is_err());
        assert!(dual_coupling(-0.1).is_err());
    }

    #[test]
    fn round_trip() {
        for x in [0.2, 0.5, 1.0] {
            let back = map_to_quantum_coupling(dual_coupling(x).unwrap()).unwrap();
            assert!((back - x).abs() < 1e-12);
        }
        assert!(map_to_quantum_coupling(0.01).unwrap() > map_to_quantum_coupling(0.1).unwrap());
    }

    #[test]
    fn two_site_bond() {
        let g = DualIsingGraph::from_edges(2, &[[0, 1]]);
        for k in [0.0, 0.3, 1.7] {
            let z = exact_ising_sum(&g, k).unwrap();
            let closed = 2.0 * f64::exp(k) + 2.0 * f64::exp(-k);
            assert!((z - closed).abs() < 1e-12 * closed);
        }
    }

    #[test]
    fn brute_force_on_a_triangle_with_loop() {
        let g = DualIsingGraph::from_edges(3, &[[0, 1], [1, 2], [2, 0], [1, 1]]);
        let k = 0.37;
        let mut z = 0.0;
        for m in 0..8 {
            let s: Vec<i8> = (0..3)
                .map(|i| if m >> i & 1 == 1 { -1 } else { 1 })
                .collect();
            z += (k * g.bond_sum(&s) as f64).exp();
        }
        assert!((exact_ising_sum(&g, k).unwrap() - z).abs() < 1e-12 * z);
    }

    #[test]
    fn l2_ising_sum_at_zero_coupling() {
        let c = build_lattice(LatticeSpec::new(2).unwrap());
        let h = ising_histogram(&c.dual_graph()).unwrap();
        assert_eq!(h.counts.values().sum::<u64>(), 1 << 16);
        assert_eq!(h.partition_function(0.0), 65536.0);
        assert_eq!(h.counts[&112], 2);
    }

    #[test]
    fn sector_identity_at_l2() {
        let c = build_lattice(LatticeSpec::new(2).unwrap());
        let grid: Vec<f64> = (0..10).map(|i| 0.3 + 0.1 * i as f64).collect();
        let r = verify_sector_duality(&c, &grid).unwrap();
        assert!(r.max_relative_error <= 1e-9, "{r:?}");
        assert!(r.ratio_at_least_one);
        assert!(r.ratio_monotone);
        assert!(r.rows.iter().all(|row| row.sector_ratio < 8.0));
    }

    #[test]
    fn sector_identity_on_multigraph() {
        let c = build_lattice(LatticeSpec::multigraph(1).unwrap());
        let r = verify_sector_duality(&c, &[0.4, 0.8]).unwrap();
        assert!(r.max_relative_error <= 1e-12, "{r:?}");
    }

    #[test]
    fn trivial_sector_at_vanishing_coupling() {
        let c = build_lattice(LatticeSpec::new(2).unwrap());
        let p = PartitionParams::new(1e-8).unwrap();
        assert!((trivial_sector_sum(&c, p).unwrap() - 1.0).abs() < 1e-12);
    }
}
