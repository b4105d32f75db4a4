//! Exact evaluation of the reduced partition sum over stabilizer relations,
//! its surface / pure-type / cross decomposition, and the Ising-gauge and
//! dual-Ising sums it is compared against.

mod bound;
mod ising;

pub use bound::{
    dominance_report, envelope_exponent, verify_cross_term_bound, BoundParams, BoundReport,
    DominanceRow,
};
pub use ising::{
    dual_coupling, exact_ising_mean_energy, exact_ising_sum, ising_histogram,
    map_to_quantum_coupling, self_dual_coupling, trivial_sector_sum, verify_sector_duality,
    IsingHistogram, SectorDualityReport, SectorDualityRow,
};

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::Serialize;

use crate::code::{closed_surface_basis, face_edge_matrix, type_mask, StabilizerCode};
use crate::error::{Error, Result};
use crate::lattice::CellComplex;
use crate::pauli::{BitVec, PauliLetter};

/// Largest subspace dimension enumerated exhaustively.
pub const ENUMERATION_LIMIT: usize = 24;

const PREFIX_BITS: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PartitionParams {
    beta_j: f64,
    alpha: f64,
}

impl PartitionParams {
    pub fn new(beta_j: f64) -> Result<Self> {
        if !(beta_j.is_finite() && beta_j > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "betaJ must be positive and finite, got {beta_j}"
            )));
        }
        Ok(Self {
            beta_j,
            alpha: beta_j.tanh(),
        })
    }

    pub fn beta_j(&self) -> f64 {
        self.beta_j
    }

    /// `tanh βJ`.
    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

/// Rejects complexes whose relation space is certainly too large to
/// enumerate. Commuting generators have rank at most `V`, so the kernel has
/// dimension at least `F - V`.
pub fn enumeration_guard(c: &CellComplex) -> Result<()> {
    let lower = c.num_faces().saturating_sub(c.num_vertices());
    if lower > ENUMERATION_LIMIT {
        return Err(Error::Guard {
            what: "relation space (lower bound)",
            dim: lower,
            limit: ENUMERATION_LIMIT,
        });
    }
    Ok(())
}

fn check_dim(what: &'static str, dim: usize) -> Result<()> {
    if dim > ENUMERATION_LIMIT {
        return Err(Error::Guard {
            what,
            dim,
            limit: ENUMERATION_LIMIT,
        });
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum KernelClass {
    Empty,
    ClosedSurface,
    PureType,
    Cross,
}

#[derive(Clone, Debug, PartialEq)]
pub struct KernelElement {
    pub faces: BitVec,
    /// Faces of type X, Y, Z in the subset.
    pub counts: [u32; 3],
    pub class: KernelClass,
    /// Union of complete type classes, whatever `class` says.
    pub pure_type: bool,
}

impl KernelElement {
    pub fn weight(&self) -> u32 {
        self.counts.iter().sum()
    }
}

fn classify(counts: [u32; 3], closed: bool, sizes: [u32; 3]) -> (KernelClass, bool) {
    let empty = counts == [0; 3];
    let pure = !empty && counts.iter().zip(&sizes).all(|(&n, &s)| n == 0 || n == s);
    let class = if empty {
        KernelClass::Empty
    } else if closed {
        KernelClass::ClosedSurface
    } else if pure {
        KernelClass::PureType
    } else {
        KernelClass::Cross
    };
    (class, pure)
}

/// Basis vectors laid out as face words followed by edge-boundary words, so
/// one XOR updates both.
struct KernelLayout {
    face_words: usize,
    num_faces: usize,
    basis: Vec<Vec<u64>>,
    masks: [Vec<u64>; 3],
    sizes: [u32; 3],
}

impl KernelLayout {
    fn new(c: &CellComplex, faces: &[BitVec]) -> Self {
        let incidence = face_edge_matrix(c);
        let basis = faces
            .iter()
            .map(|v| {
                let mut w = v.words().to_vec();
                w.extend_from_slice(incidence.combine_rows(v).words());
                w
            })
            .collect();
        let masks = [PauliLetter::X, PauliLetter::Y, PauliLetter::Z]
            .map(|k| type_mask(c, k).words().to_vec());
        let sizes = masks
            .each_ref()
            .map(|m| m.iter().map(|w| w.count_ones()).sum());
        Self {
            face_words: c.num_faces().div_ceil(64),
            num_faces: c.num_faces(),
            basis,
            masks,
            sizes,
        }
    }

    fn counts(&self, state: &[u64]) -> [u32; 3] {
        self.masks
            .each_ref()
            .map(|m| m.iter().zip(state).map(|(a, b)| (a & b).count_ones()).sum())
    }

    fn closed(&self, state: &[u64]) -> bool {
        state[self.face_words..].iter().all(|&w| w == 0)
    }
}

/// Calls `visit` on every combination of `basis` XORed onto `start`, in
/// Gray-code order.
fn gray_walk(basis: &[Vec<u64>], start: Vec<u64>, mut visit: impl FnMut(&[u64])) {
    let mut state = start;
    visit(&state);
    for i in 1u64..(1u64 << basis.len()) {
        for (s, w) in state.iter_mut().zip(&basis[i.trailing_zeros() as usize]) {
            *s ^= w;
        }
        visit(&state);
    }
}

/// Splits the walk over the top basis coordinates and merges the per-prefix
/// results in prefix order.
fn parallel_walk<H, I, V, M>(basis: &[Vec<u64>], width: usize, init: I, visit: V, merge: M) -> H
where
    H: Send,
    I: Fn() -> H + Sync,
    V: Fn(&mut H, &[u64]) + Sync,
    M: Fn(H, H) -> H,
{
    let high = basis.len().min(PREFIX_BITS);
    let low = basis.len() - high;
    let parts: Vec<H> = (0u64..1 << high)
        .into_par_iter()
        .map(|prefix| {
            let mut start = vec![0u64; width];
            for (j, v) in basis[low..].iter().enumerate() {
                if prefix >> j & 1 == 1 {
                    for (s, w) in start.iter_mut().zip(v) {
                        *s ^= w;
                    }
                }
            }
            let mut acc = init();
            gray_walk(&basis[..low], start, |s| visit(&mut acc, s));
            acc
        })
        .collect();
    parts.into_iter().reduce(merge).unwrap_or_else(init)
}

/// Sequential Gray-code stream over the relation space of the code.
pub struct KernelEnumeration {
    layout: KernelLayout,
    state: Vec<u64>,
    next: u64,
    end: u64,
}

impl KernelEnumeration {
    pub fn dim(&self) -> usize {
        self.layout.basis.len()
    }
}

impl Iterator for KernelEnumeration {
    type Item = KernelElement;

    fn next(&mut self) -> Option<KernelElement> {
        if self.next == self.end {
            return None;
        }
        if self.next > 0 {
            let b = &self.layout.basis[self.next.trailing_zeros() as usize];
            for (s, w) in self.state.iter_mut().zip(b) {
                *s ^= w;
            }
        }
        self.next += 1;
        let l = &self.layout;
        let counts = l.counts(&self.state);
        let (class, pure_type) = classify(counts, l.closed(&self.state), l.sizes);
        let faces = BitVec::from_indices(
            l.num_faces,
            (0..l.num_faces).filter(|&f| self.state[f / 64] >> (f % 64) & 1 == 1),
        );
        Some(KernelElement {
            faces,
            counts,
            class,
            pure_type,
        })
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = (self.end - self.next) as usize;
        (n, Some(n))
    }
}

/// Every face subset whose plaquette product is a scalar, each exactly once.
pub fn enumerate_kernel(c: &CellComplex, code: &StabilizerCode) -> Result<KernelEnumeration> {
    check_dim("relation space", code.kernel_dim())?;
    let layout = KernelLayout::new(c, code.kernel_basis());
    let width = layout.basis.first().map_or(0, Vec::len);
    Ok(KernelEnumeration {
        end: 1 << layout.basis.len(),
        state: vec![0; width],
        next: 0,
        layout,
    })
}

/// Relation-space element counts keyed by class and per-type face counts.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KernelHistogram {
    pub dim: usize,
    pub type_sizes: [u32; 3],
    pub bins: BTreeMap<(KernelClass, [u32; 3]), u64>,
}

impl KernelHistogram {
    pub fn total_count(&self) -> u64 {
        self.bins.values().sum()
    }

    pub fn class_count(&self, class: KernelClass) -> u64 {
        self.bins
            .iter()
            .filter(|((k, _), _)| *k == class)
            .map(|(_, n)| n)
            .sum()
    }

    /// Elements that are unions of complete type classes.
    pub fn pure_type_count(&self) -> u64 {
        let sizes = self.type_sizes;
        self.bins
            .iter()
            .filter(|((_, c), _)| classify(*c, false, sizes).1)
            .map(|(_, n)| n)
            .sum()
    }

    /// Closed-surface bins including the empty set.
    pub fn surfaces(&self) -> impl Iterator<Item = ([u32; 3], u64)> + '_ {
        self.bins
            .iter()
            .filter(|((k, _), _)| matches!(k, KernelClass::Empty | KernelClass::ClosedSurface))
            .map(|((_, c), &n)| (*c, n))
    }

    pub fn reduced_sum(&self, params: PartitionParams) -> ReducedPartitionSum {
        let a = params.alpha();
        let term = |c: &[u32; 3], n: u64| n as f64 * a.powi(c.iter().sum::<u32>() as i32);
        let mut total = CompensatedSum::default();
        let mut parts: BTreeMap<KernelClass, CompensatedSum> = BTreeMap::new();
        for ((class, c), &n) in &self.bins {
            let t = term(c, n);
            total.add(t);
            let key = if *class == KernelClass::Empty {
                KernelClass::ClosedSurface
            } else {
                *class
            };
            parts.entry(key).or_default().add(t);
        }
        let part = |k| parts.get(&k).map_or(0.0, CompensatedSum::value);
        let [nx, ny, nz] = self.type_sizes.map(|n| a.powi(n as i32));
        ReducedPartitionSum {
            beta_j: params.beta_j(),
            alpha: a,
            total: total.value(),
            surface_part: part(KernelClass::ClosedSurface),
            pure_type_part: part(KernelClass::PureType),
            cross_part: part(KernelClass::Cross),
            pure_type_product: (1.0 + nx) * (1.0 + ny) * (1.0 + nz) - 1.0,
        }
    }
}

/// Histogram of the full relation space, enumerated in parallel.
pub fn kernel_histogram(c: &CellComplex, code: &StabilizerCode) -> Result<KernelHistogram> {
    check_dim("relation space", code.kernel_dim())?;
    let layout = KernelLayout::new(c, code.kernel_basis());
    let width = layout.face_words + c.num_edges().div_ceil(64);
    let counts = parallel_walk(
        &layout.basis,
        width,
        HashMap::<(KernelClass, [u32; 3]), u64>::new,
        |h, s| {
            let counts = layout.counts(s);
            let (class, _) = classify(counts, layout.closed(s), layout.sizes);
            *h.entry((class, counts)).or_default() += 1;
        },
        |mut a, b| {
            for (k, n) in b {
                *a.entry(k).or_default() += n;
            }
            a
        },
    );
    Ok(KernelHistogram {
        dim: layout.basis.len(),
        type_sizes: layout.sizes,
        bins: counts.into_iter().collect(),
    })
}

/// Reduced sum over the relation space, split by class. The pure-type part
/// holds only pure-type elements that are not closed surfaces;
/// `pure_type_product` is `(1+α^{n_x})(1+α^{n_y})(1+α^{n_z}) - 1` over all
/// seven unions for comparison.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ReducedPartitionSum {
    pub beta_j: f64,
    pub alpha: f64,
    pub total: f64,
    pub surface_part: f64,
    pub pure_type_part: f64,
    pub cross_part: f64,
    pub pure_type_product: f64,
}

impl ReducedPartitionSum {
    /// `ln Z = V ln 2 + F ln cosh βJ + ln total`.
    pub fn log_partition_function(&self, num_qubits: usize, num_faces: usize) -> f64 {
        num_qubits as f64 * std::f64::consts::LN_2
            + num_faces as f64 * self.beta_j.cosh().ln()
            + self.total.ln()
    }
}

pub fn reduced_quantum_sum(
    c: &CellComplex,
    code: &StabilizerCode,
    params: PartitionParams,
) -> Result<ReducedPartitionSum> {
    Ok(kernel_histogram(c, code)?.reduced_sum(params))
}

/// Counts of edge-even face subsets by size, enumerated from the boundary
/// map alone.
pub fn closed_surface_weights(c: &CellComplex) -> Result<BTreeMap<u32, u64>> {
    let basis: Vec<Vec<u64>> = closed_surface_basis(c)
        .iter()
        .map(|v| v.words().to_vec())
        .collect();
    check_dim("closed-surface space", basis.len())?;
    Ok(weight_histogram(&basis, c.num_faces().div_ceil(64)))
}

fn weight_histogram(basis: &[Vec<u64>], width: usize) -> BTreeMap<u32, u64> {
    parallel_walk(
        basis,
        width,
        BTreeMap::<u32, u64>::new,
        |h, s| *h.entry(s.iter().map(|w| w.count_ones()).sum()).or_default() += 1,
        |mut a, b| {
            for (k, n) in b {
                *a.entry(k).or_default() += n;
            }
            a
        },
    )
}

fn weighted_sum(weights: &BTreeMap<u32, u64>, alpha: f64) -> f64 {
    let mut s = CompensatedSum::default();
    for (&w, &n) in weights {
        s.add(n as f64 * alpha.powi(w as i32));
    }
    s.value()
}

/// Σ over edge-even face subsets of `α^{A_c}`: the reduced Ising-gauge sum.
pub fn reduced_igt_sum(c: &CellComplex, params: PartitionParams) -> Result<f64> {
    Ok(weighted_sum(&closed_surface_weights(c)?, params.alpha()))
}

/// Neumaier summation.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::build_code;
    use crate::lattice::{build_lattice, LatticeSpec};

    fn setup(l: i64) -> (CellComplex, StabilizerCode) {
        let c = build_lattice(LatticeSpec::new(l).unwrap());
        let code = build_code(&c).unwrap();
        (c, code)
    }

    #[test]
    fn histogram_counts_at_l2() {
        let (c, code) = setup(2);
        let h = kernel_histogram(&c, &code).unwrap();
        assert_eq!(h.dim, 19);
        assert_eq!(h.total_count(), 1 << 19);
        assert_eq!(h.class_count(KernelClass::Empty), 1);
        assert_eq!(
            h.class_count(KernelClass::Empty) + h.class_count(KernelClass::ClosedSurface),
            1 << 18
        );
        assert_eq!(h.pure_type_count(), 7);
        assert_eq!(h.class_count(KernelClass::PureType), 4);
        assert_eq!(h.type_sizes, [32, 48, 32]);
    }

    #[test]
    fn stream_agrees_with_histogram() {
        let (c, code) = setup(2);
        let h = kernel_histogram(&c, &code).unwrap();
        let mut bins: BTreeMap<(KernelClass, [u32; 3]), u64> = BTreeMap::new();
        let mut pure = 0;
        let mut seen = std::collections::HashSet::new();
        for e in enumerate_kernel(&c, &code).unwrap() {
            *bins.entry((e.class, e.counts)).or_default() += 1;
            pure += e.pure_type as u64;
            assert!(seen.insert(e.faces.words().to_vec()));
        }
        assert_eq!(bins, h.bins);
        assert_eq!(pure, 7);
    }

    #[test]
    fn stream_elements_are_scalar_products() {
        let (c, code) = setup(2);
        for e in enumerate_kernel(&c, &code).unwrap().step_by(4099) {
            assert!(code.product(&e.faces).is_identity());
            let closed = face_edge_matrix(&c).combine_rows(&e.faces).is_zero();
            assert_eq!(
                closed,
                matches!(e.class, KernelClass::Empty | KernelClass::ClosedSurface)
            );
        }
    }

    #[test]
    fn decomposition_adds_up() {
        let (c, code) = setup(2);
        let h = kernel_histogram(&c, &code).unwrap();
        for bj in [0.05, 0.3, 0.6, 1.2, 3.0] {
            let r = h.reduced_sum(PartitionParams::new(bj).unwrap());
            let parts = r.surface_part + r.pure_type_part + r.cross_part;
            assert!((r.total - parts).abs() <= 4.0 * f64::EPSILON * r.total);
        }
        let r = h.reduced_sum(PartitionParams::new(1e-6).unwrap());
        assert!((r.total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pure_type_product_matches_seven_terms() {
        let (c, code) = setup(2);
        let h = kernel_histogram(&c, &code).unwrap();
        let p = PartitionParams::new(0.9).unwrap();
        let r = h.reduced_sum(p);
        let a = p.alpha();
        let seven: f64 = h
            .bins
            .iter()
            .filter(|((_, cnt), _)| classify(*cnt, false, h.type_sizes).1)
            .map(|((_, cnt), &n)| n as f64 * a.powi(cnt.iter().sum::<u32>() as i32))
            .sum();
        assert!((seven - r.pure_type_product).abs() < 1e-14);
    }

    #[test]
    fn surface_part_equals_gauge_sum() {
        let (c, code) = setup(2);
        let h = kernel_histogram(&c, &code).unwrap();
        for bj in [0.3, 0.6, 1.0] {
            let p = PartitionParams::new(bj).unwrap();
            let q = h.reduced_sum(p).surface_part;
            let g = reduced_igt_sum(&c, p).unwrap();
            assert!(((q - g) / g).abs() <= 1e-12);
        }
    }

    #[test]
    fn single_cell_is_a_closed_surface_of_fourteen() {
        let c = build_lattice(LatticeSpec::new(2).unwrap());
        let w = closed_surface_weights(&c).unwrap();
        assert_eq!(w.values().sum::<u64>(), 1 << 18);
        assert_eq!(w[&0], 1);
        assert_eq!(w[&14], 16);
        assert!(w.keys().skip(1).all(|&k| k >= 14));
    }

    #[test]
    fn brute_force_oracle_on_small_walk() {
        let basis: Vec<Vec<u64>> = vec![vec![0b0011], vec![0b0110], vec![0b1100], vec![0b1000]];
        let h = weight_histogram(&basis, 1);
        let mut brute = BTreeMap::new();
        for m in 0u32..16 {
            let w = (0..4)
                .filter(|j| m >> j & 1 == 1)
                .fold(0u64, |acc, j| acc ^ basis[j][0]);
            *brute.entry(w.count_ones()).or_insert(0u64) += 1;
        }
        assert_eq!(h, brute);
    }

    #[test]
    fn guard_rejects_large_lattices_early() {
        let c = build_lattice(LatticeSpec::new(3).unwrap());
        assert!(matches!(enumeration_guard(&c), Err(Error::Guard { .. })));
        let c = build_lattice(LatticeSpec::new(2).unwrap());
        assert!(enumeration_guard(&c).is_ok());
        let code = build_code(&build_lattice(LatticeSpec::new(3).unwrap())).unwrap();
        let c = build_lattice(LatticeSpec::new(3).unwrap());
        assert!(matches!(
            kernel_histogram(&c, &code),
            Err(Error::Guard { dim: 57, .. })
        ));
    }

    #[test]
    fn params_validate() {
        assert!(PartitionParams::new(0.0).is_err());
        assert!(PartitionParams::new(-1.0).is_err());
        assert!(PartitionParams::new(f64::NAN).is_err());
        assert!((PartitionParams::new(0.5).unwrap().alpha() - 0.5f64.tanh()).abs() < 1e-16);
    }

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let mut s = CompensatedSum::default();
        s.add(1.0);
        for _ in 0..1000 {
            s.add(1e-17);
        }
        s.add(-1.0);
        assert!((s.value() - 1e-14).abs() < 1e-20);
    }
}
