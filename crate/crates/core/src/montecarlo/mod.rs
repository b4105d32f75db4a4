//! Metropolis sampling of the dual Ising model and location of its
//! specific-heat peak.

mod gauge;
mod stats;

pub use gauge::{exact_gauge_mean_plaquette, run_gauge_mc, GaugeSummary};
pub use stats::{jackknife, Moments};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::DualIsingGraph;
use crate::partition::map_to_quantum_coupling;

/// Sweeps between audits of the cached energy.
pub const AUDIT_INTERVAL: usize = 1000;

const JACKKNIFE_BLOCKS: usize = 20;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MCConfig {
    pub size: usize,
    /// Dual couplings `β̃J` to simulate.
    pub grid: Vec<f64>,
    pub sweeps: usize,
    pub thermalization: usize,
    pub interval: usize,
    pub seed: u64,
    pub replicates: usize,
}

impl MCConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        if self.sweeps <= self.thermalization {
            return bad(format!(
                "sweeps ({}) must exceed thermalization ({})",
                self.sweeps, self.thermalization
            ));
        }
        if self.interval == 0 || self.replicates == 0 {
            return bad("interval and replicates must be positive".into());
        }
        if self.grid.is_empty() || self.grid.iter().any(|k| !(k.is_finite() && *k >= 0.0)) {
            return bad("grid must be nonempty with finite nonnegative couplings".into());
        }
        if (self.sweeps - self.thermalization) / self.interval < JACKKNIFE_BLOCKS {
            return bad(format!(
                "need at least {JACKKNIFE_BLOCKS} measurements per chain"
            ));
        }
        Ok(())
    }

    pub fn measurements_per_chain(&self) -> usize {
        (self.sweeps - self.thermalization) / self.interval
    }

    /// Independent stream for one chain.
    pub fn rng(&self, grid_index: usize, replicate: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(((self.size as u64) << 40) | ((grid_index as u64) << 20) | replicate as u64);
        rng
    }
}

/// Neighbours of each site with self-loops removed (a self-loop bond never
/// changes its energy).
fn flip_neighbors(graph: &DualIsingGraph) -> Vec<Vec<usize>> {
    (0..graph.num_sites())
        .map(|s| {
            graph
                .neighbors(s)
                .iter()
                .copied()
                .filter(|&t| t != s)
                .collect()
        })
        .collect()
}

/// Metropolis acceptance probabilities indexed by `s_i h_i + max_degree`.
struct AcceptanceTable {
    offset: i64,
    probs: Vec<f64>,
}

impl AcceptanceTable {
    fn new(coupling: f64, max_degree: usize) -> Self {
        let d = max_degree as i64;
        Self {
            offset: d,
            probs: (-d..=d)
                .map(|sh| (-2.0 * coupling * sh as f64).exp().min(1.0))
                .collect(),
        }
    }

    fn get(&self, sh: i64) -> f64 {
        self.probs[(sh + self.offset) as usize]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpinState {
    pub spins: Vec<i8>,
    /// Cached `Σ_bonds s_a s_b`; the energy is its negative.
    bond_sum: i64,
}

impl SpinState {
    pub fn new(graph: &DualIsingGraph, spins: Vec<i8>) -> Self {
        let bond_sum = graph.bond_sum(&spins);
        Self { spins, bond_sum }
    }

    pub fn random(graph: &DualIsingGraph, rng: &mut impl Rng) -> Self {
        let spins = (0..graph.num_sites())
            .map(|_| if rng.gen::<bool>() { 1 } else { -1 })
            .collect();
        Self::new(graph, spins)
    }

    pub fn energy(&self) -> i64 {
        -self.bond_sum
    }

    pub fn recomputed_energy(&self, graph: &DualIsingGraph) -> i64 {
        -graph.bond_sum(&self.spins)
    }

    pub fn magnetization(&self) -> f64 {
        self.spins.iter().map(|&s| s as i64).sum::<i64>() as f64 / self.spins.len() as f64
    }

    fn try_flip(
        &mut self,
        site: usize,
        neighbors: &[usize],
        table: &AcceptanceTable,
        rng: &mut impl Rng,
    ) -> bool {
        let s = self.spins[site] as i64;
        let h: i64 = neighbors.iter().map(|&t| self.spins[t] as i64).sum();
        let p = table.get(s * h);
        if p >= 1.0 || rng.gen::<f64>() < p {
            self.spins[site] = -self.spins[site];
            self.bond_sum -= 2 * s * h;
            true
        } else {
            false
        }
    }
}

/// A single-spin-flip Metropolis chain at fixed dual coupling.
pub struct Chain<'a> {
    graph: &'a DualIsingGraph,
    neighbors: Vec<Vec<usize>>,
    table: AcceptanceTable,
    pub state: SpinState,
    pub attempts: u64,
    pub accepted: u64,
}

impl<'a> Chain<'a> {
    pub fn new(graph: &'a DualIsingGraph, coupling: f64, state: SpinState) -> Self {
        let neighbors = flip_neighbors(graph);
        let max_degree = neighbors.iter().map(Vec::len).max().unwrap_or(0);
        Self {
            graph,
            table: AcceptanceTable::new(coupling, max_degree),
            neighbors,
            state,
            attempts: 0,
            accepted: 0,
        }
    }

    /// One Metropolis update of `site`; returns whether it flipped.
    pub fn update(&mut self, site: usize, rng: &mut impl Rng) -> bool {
        let flipped = self
            .state
            .try_flip(site, &self.neighbors[site], &self.table, rng);
        self.attempts += 1;
        self.accepted += flipped as u64;
        flipped
    }

    /// Updates every site once, in id order.
    pub fn sweep(&mut self, rng: &mut impl Rng) {
        for site in 0..self.graph.num_sites() {
            self.update(site, rng);
        }
    }

    pub fn acceptance_rate(&self) -> f64 {
        self.accepted as f64 / self.attempts.max(1) as f64
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ObservableSeries {
    pub dual_beta_j: f64,
    pub num_sites: usize,
    /// Total energy `-Σ s_a s_b` per measurement, replicates concatenated.
    pub energies: Vec<f64>,
    pub magnetizations: Vec<f64>,
    pub acceptance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ObservableSummary {
    pub dual_beta_j: f64,
    pub e_mean: f64,
    pub e_err: f64,
    pub cv: f64,
    pub cv_err: f64,
    pub m_abs: f64,
    pub m_abs_err: f64,
    pub binder: f64,
    pub binder_err: f64,
    pub acceptance: f64,
}

impl ObservableSeries {
    fn moments(&self) -> Vec<Moments> {
        let n = self.energies.len();
        let blocks = JACKKNIFE_BLOCKS.min(n.max(1));
        (0..blocks)
            .map(|b| {
                let (lo, hi) = (b * n / blocks, (b + 1) * n / blocks);
                Moments::of(&self.energies[lo..hi], &self.magnetizations[lo..hi])
            })
            .collect()
    }

    pub fn summary(&self) -> ObservableSummary {
        let k = self.dual_beta_j;
        let n = self.num_sites as f64;
        let blocks = self.moments();
        let (e_mean, e_err) = jackknife(&blocks, |m| m.mean_energy());
        let (cv, cv_err) = jackknife(&blocks, |m| k * k * m.energy_variance() / n);
        let (m_abs, m_abs_err) = jackknife(&blocks, |m| m.mean_abs_magnetization());
        let (binder, binder_err) = jackknife(&blocks, |m| m.binder());
        ObservableSummary {
            dual_beta_j: k,
            e_mean,
            e_err,
            cv,
            cv_err,
            m_abs,
            m_abs_err,
            binder,
            binder_err,
            acceptance: self.acceptance,
        }
    }
}

fn run_chain(
    graph: &DualIsingGraph,
    config: &MCConfig,
    grid_index: usize,
    replicate: usize,
) -> (Vec<f64>, Vec<f64>, u64, u64) {
    let mut rng = config.rng(grid_index, replicate);
    let state = SpinState::random(graph, &mut rng);
    let mut chain = Chain::new(graph, config.grid[grid_index], state);
    let mut energies = Vec::with_capacity(config.measurements_per_chain());
    let mut mags = Vec::with_capacity(config.measurements_per_chain());
    for sweep in 1..=config.sweeps {
        chain.sweep(&mut rng);
        if sweep % AUDIT_INTERVAL == 0 {
            assert_eq!(
                chain.state.energy(),
                chain.state.recomputed_energy(graph),
                "cached energy drifted"
            );
        }
        if sweep > config.thermalization
            && (sweep - config.thermalization).is_multiple_of(config.interval)
        {
            energies.push(chain.state.energy() as f64);
            mags.push(chain.state.magnetization());
        }
    }
    (energies, mags, chain.attempts, chain.accepted)
}

/// One series per grid point. Chains run in parallel and are gathered in
/// (grid, replicate) order, so results do not depend on the worker count.
pub fn run_ising_mc(graph: &DualIsingGraph, config: &MCConfig) -> Result<Vec<ObservableSeries>> {
    config.validate()?;
    let jobs: Vec<(usize, usize)> = (0..config.grid.len())
        .flat_map(|g| (0..config.replicates).map(move |r| (g, r)))
        .collect();
    let chains: Vec<_> = jobs
        .par_iter()
        .map(|&(g, r)| run_chain(graph, config, g, r))
        .collect();
    let mut out = Vec::with_capacity(config.grid.len());
    for (g, group) in chains.chunks(config.replicates).enumerate() {
        let mut series = ObservableSeries {
            dual_beta_j: config.grid[g],
            num_sites: graph.num_sites(),
            energies: Vec::new(),
            magnetizations: Vec::new(),
            acceptance: 0.0,
        };
        let (mut attempts, mut accepted) = (0, 0);
        for (e, m, a, acc) in group {
            series.energies.extend(e);
            series.magnetizations.extend(m);
            attempts += a;
            accepted += acc;
        }
        series.acceptance = accepted as f64 / attempts as f64;
        out.push(series);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PeakEstimate {
    pub size: usize,
    pub dual_beta_j: f64,
    pub height: f64,
    pub uncertainty: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TransitionEstimate {
    pub peaks: Vec<PeakEstimate>,
    /// Crossing of the Binder cumulants of the two largest sizes, if any.
    pub binder_crossing: Option<f64>,
    pub dual_beta_jc: f64,
    pub uncertainty: f64,
    pub beta_jc_quantum: f64,
}

/// Specific-heat peak from a parabola through the largest point and its two
/// neighbours.
pub fn specific_heat_peak(size: usize, rows: &[ObservableSummary]) -> Result<PeakEstimate> {
    if rows.len() < 3 {
        return Err(Error::InvalidParameter(format!(
            "need at least 3 grid points for L = {size}"
        )));
    }
    let mut rows = rows.to_vec();
    rows.sort_by(|a, b| a.dual_beta_j.total_cmp(&b.dual_beta_j));
    let i = (0..rows.len())
        .reduce(|best, j| if rows[j].cv > rows[best].cv { j } else { best })
        .unwrap();
    if i == 0 || i == rows.len() - 1 {
        return Err(Error::PeakAtBoundary {
            size,
            coupling: rows[i].dual_beta_j,
        });
    }
    let (x0, x1, x2) = (
        rows[i - 1].dual_beta_j,
        rows[i].dual_beta_j,
        rows[i + 1].dual_beta_j,
    );
    let (y0, y1, y2) = (rows[i - 1].cv, rows[i].cv, rows[i + 1].cv);
    let d01 = (y1 - y0) / (x1 - x0);
    let d12 = (y2 - y1) / (x2 - x1);
    let curvature = (d12 - d01) / (x2 - x0);
    let (x, h) = if curvature < 0.0 {
        let xv = 0.5 * (x0 + x1) - d01 / (2.0 * curvature);
        let xv = xv.clamp(x0, x2);
        let hv = y1 + d01 * (xv - x1) + curvature * (xv - x0) * (xv - x1);
        (xv, hv.max(y1))
    } else {
        (x1, y1)
    };
    Ok(PeakEstimate {
        size,
        dual_beta_j: x,
        height: h,
        uncertainty: 0.5 * (x2 - x0) / 2.0,
    })
}

fn binder_crossing(a: &[ObservableSummary], b: &[ObservableSummary]) -> Option<f64> {
    let diffs: Vec<(f64, f64)> = a
        .iter()
        .filter_map(|ra| {
            b.iter()
                .find(|rb| rb.dual_beta_j == ra.dual_beta_j)
                .map(|rb| (ra.dual_beta_j, ra.binder - rb.binder))
        })
        .collect();
    diffs.windows(2).find_map(|w| {
        let ((x0, d0), (x1, d1)) = (w[0], w[1]);
        (d0 * d1 < 0.0).then(|| x0 + (x1 - x0) * d0 / (d0 - d1))
    })
}

/// Combines per-size scans into a critical dual coupling and its quantum
/// image. The estimate is the peak of the largest size; the uncertainty
/// covers grid resolution and the spread between sizes.
pub fn locate_transition(
    results: &[(usize, Vec<ObservableSummary>)],
) -> Result<TransitionEstimate> {
    if results.len() < 2 {
        return Err(Error::InvalidParameter(
            "locating a transition needs at least two sizes".into(),
        ));
    }
    let mut results = results.to_vec();
    results.sort_by_key(|(l, _)| *l);
    let peaks = results
        .iter()
        .map(|(l, rows)| specific_heat_peak(*l, rows))
        .collect::<Result<Vec<_>>>()?;
    let last = peaks.last().unwrap();
    let spread = peaks
        .iter()
        .map(|p| (p.dual_beta_j - last.dual_beta_j).abs())
        .fold(0.0, f64::max);
    let n = results.len();
    let sorted = |rows: &Vec<ObservableSummary>| {
        let mut r = rows.clone();
        r.sort_by(|a, b| a.dual_beta_j.total_cmp(&b.dual_beta_j));
        r
    };
    let crossing = binder_crossing(&sorted(&results[n - 2].1), &sorted(&results[n - 1].1));
    Ok(TransitionEstimate {
        binder_crossing: crossing,
        dual_beta_jc: last.dual_beta_j,
        uncertainty: last.uncertainty.max(spread),
        beta_jc_quantum: map_to_quantum_coupling(last.dual_beta_j)?,
        peaks,
    })
}
