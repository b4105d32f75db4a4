use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{jackknife, Moments, JACKKNIFE_BLOCKS};
use crate::error::{Error, Result};
use crate::lattice::CellComplex;
use crate::partition::{closed_surface_weights, PartitionParams};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GaugeSummary {
    pub beta_j: f64,
    /// Mean of the plaquette product `Π_{e∈f} σ_e`, averaged over faces.
    pub plaquette_mean: f64,
    pub plaquette_err: f64,
    pub acceptance: f64,
}

/// Metropolis on edge spins with energy `-Σ_f Π_{e∈f} σ_e`, for checking the
/// gauge side of the duality against enumeration.
pub fn run_gauge_mc(
    c: &CellComplex,
    beta_j: f64,
    sweeps: usize,
    thermalization: usize,
    seed: u64,
) -> Result<GaugeSummary> {
    PartitionParams::new(beta_j)?;
    if sweeps <= thermalization || sweeps - thermalization < JACKKNIFE_BLOCKS {
        return Err(Error::InvalidParameter(format!(
            "need at least {JACKKNIFE_BLOCKS} measured sweeps"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edge_faces: Vec<Vec<usize>> = (0..c.num_edges())
        .map(|e| c.edge_faces(e).to_vec())
        .collect();
    let mut plaquettes = vec![1i8; c.num_faces()];
    let mut sum = c.num_faces() as i64;
    // Flipping an edge changes Σ P by -2 Σ_{f∋e} P_f; at most 3 faces meet.
    let probs: Vec<f64> = (-3..=3)
        .map(|s: i64| (-2.0 * beta_j * s as f64).exp().min(1.0))
        .collect();
    let (mut attempts, mut accepted) = (0u64, 0u64);
    let mut samples = Vec::with_capacity(sweeps - thermalization);
    for sweep in 0..sweeps {
        for faces in &edge_faces {
            let s: i64 = faces.iter().map(|&f| plaquettes[f] as i64).sum();
            let p = probs[(s + 3) as usize];
            attempts += 1;
            if p >= 1.0 || rng.gen::<f64>() < p {
                accepted += 1;
                for &f in faces {
                    plaquettes[f] = -plaquettes[f];
                }
                sum -= 2 * s;
            }
        }
        if sweep >= thermalization {
            samples.push(sum as f64 / c.num_faces() as f64);
        }
    }
    let n = samples.len();
    let blocks: Vec<Moments> = (0..JACKKNIFE_BLOCKS)
        .map(|b| {
            let s = &samples[b * n / JACKKNIFE_BLOCKS..(b + 1) * n / JACKKNIFE_BLOCKS];
            Moments::of(s, &vec![0.0; s.len()])
        })
        .collect();
    let (plaquette_mean, plaquette_err) = jackknife(&blocks, Moments::mean_energy);
    Ok(GaugeSummary {
        beta_j,
        plaquette_mean,
        plaquette_err,
        acceptance: accepted as f64 / attempts as f64,
    })
}

/// Exact `<Π_{e∈f} σ_e>` from the closed-surface expansion:
/// `α + (1-α²) Σ n_A A α^{A-1} / (F Σ n_A α^A)`.
pub fn exact_gauge_mean_plaquette(c: &CellComplex, beta_j: f64) -> Result<f64> {
    let a = PartitionParams::new(beta_j)?.alpha();
    let weights = closed_surface_weights(c)?;
    let (mut z, mut dz) = (0.0, 0.0);
    for (&w, &n) in &weights {
        z += n as f64 * a.powi(w as i32);
        if w > 0 {
            dz += n as f64 * w as f64 * a.powi(w as i32 - 1);
        }
    }
    Ok(a + (1.0 - a * a) * dz / (c.num_faces() as f64 * z))
}
