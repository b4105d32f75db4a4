//! Syndromes, energies and the excitations obtained by cutting logical
//! operators open.

use std::collections::{BTreeSet, HashSet, VecDeque};

use serde::Serialize;

use crate::code::{geometric_logicals, surface_squares, Axis, StabilizerCode, StringLogical};
use crate::error::{Error, Result};
use crate::lattice::{CellComplex, Coord};
use crate::pauli::{BitVec, PauliLetter, PauliOperator};

#[derive(Clone, Debug, PartialEq)]
pub struct Syndrome {
    pub violated: BitVec,
    pub weight: usize,
}

impl Syndrome {
    pub fn violated_faces(&self) -> impl Iterator<Item = usize> + '_ {
        self.violated.iter_ones()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum Provenance {
    TruncatedString {
        axis: Axis,
        length: usize,
    },
    TruncatedSurface {
        axis: Axis,
        squares: usize,
        perimeter: usize,
    },
    Custom,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ErrorOperator {
    pub operator: PauliOperator,
    pub provenance: Provenance,
}

impl ErrorOperator {
    pub fn custom(operator: PauliOperator) -> Self {
        Self {
            operator,
            provenance: Provenance::Custom,
        }
    }
}

pub fn syndrome(code: &StabilizerCode, error: &ErrorOperator) -> Result<Syndrome> {
    if error.operator.num_qubits() != code.num_qubits() {
        return Err(Error::LengthMismatch {
            left: code.num_qubits(),
            right: error.operator.num_qubits(),
        });
    }
    let violated = code.syndrome_bits(&error.operator);
    let weight = violated.count_ones();
    Ok(Syndrome { violated, weight })
}

/// `H = -J Σ_p B_p` evaluated on a state with the given violated plaquettes.
pub fn energy_of(code: &StabilizerCode, syndrome: &Syndrome, coupling: f64) -> f64 {
    let f = code.generators().len() as f64;
    -coupling * (f - 2.0 * syndrome.weight as f64)
}

/// First `length` letters of the geometric string logical along `axis`.
/// `length` runs from 2 up to the full winding `4L`.
pub fn truncated_string(c: &CellComplex, axis: Axis, length: usize) -> Result<ErrorOperator> {
    let (_, string) = geometric_logicals(c, axis)?;
    truncate(&string, length)
}

/// Lengths whose two endpoints are separate excitations: a string one
/// letter short of closing is a single-site error times the logical.
pub fn open_string_lengths(size: usize) -> std::ops::RangeInclusive<usize> {
    2..=4 * size - 2
}

fn truncate(string: &StringLogical, length: usize) -> Result<ErrorOperator> {
    let full = string.path.len();
    if !(2..=full).contains(&length) {
        return Err(Error::OutOfRange {
            what: "string length",
            detail: format!("{length} not in 2..={full}"),
        });
    }
    Ok(ErrorOperator {
        operator: string.truncated(length),
        provenance: Provenance::TruncatedString {
            axis: string.axis,
            length,
        },
    })
}

/// Squares of the surface layer normal to `axis`, addressed by their grid
/// position `(i, j)` along the two in-plane axes (in units of one period).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceRegion {
    pub axis: Axis,
    pub size: usize,
    pub cells: BTreeSet<(usize, usize)>,
}

fn in_plane(axis: Axis) -> (usize, usize) {
    let a = axis.index();
    ((a + 1) % 3, (a + 2) % 3)
}

impl SurfaceRegion {
    pub fn new(axis: Axis, size: usize, cells: impl IntoIterator<Item = (usize, usize)>) -> Self {
        Self {
            axis,
            size,
            cells: cells
                .into_iter()
                .map(|(i, j)| (i % size, j % size))
                .collect(),
        }
    }

    /// All layer squares within Chebyshev radius `radius` of `seed`.
    pub fn disc(axis: Axis, size: usize, seed: (usize, usize), radius: usize) -> Self {
        let r = radius as i64;
        let l = size as i64;
        let cells = (-r..=r).flat_map(|di| {
            (-r..=r).map(move |dj| {
                (
                    (seed.0 as i64 + di).rem_euclid(l) as usize,
                    (seed.1 as i64 + dj).rem_euclid(l) as usize,
                )
            })
        });
        Self::new(axis, size, cells)
    }

    /// The first `count` squares of a ring-by-ring growth around `(0,0)`:
    /// each ring adds its edge squares before its corners, so every prefix
    /// is connected.
    pub fn grown(axis: Axis, size: usize, count: usize) -> Self {
        Self::new(axis, size, growth_order(size).into_iter().take(count))
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    fn neighbors(&self, (i, j): (usize, usize)) -> [(usize, usize); 4] {
        let l = self.size;
        [
            ((i + 1) % l, j),
            ((i + l - 1) % l, j),
            (i, (j + 1) % l),
            (i, (j + l - 1) % l),
        ]
    }

    /// Region squares' sides facing a square outside the region.
    pub fn perimeter(&self) -> usize {
        self.cells
            .iter()
            .map(|&c| {
                self.neighbors(c)
                    .iter()
                    .filter(|n| !self.cells.contains(n))
                    .count()
            })
            .sum()
    }

    pub fn is_connected(&self) -> bool {
        let Some(&start) = self.cells.iter().next() else {
            return true;
        };
        let mut seen = HashSet::from([start]);
        let mut queue = VecDeque::from([start]);
        while let Some(c) = queue.pop_front() {
            for n in self.neighbors(c) {
                if self.cells.contains(&n) && seen.insert(n) {
                    queue.push_back(n);
                }
            }
        }
        seen.len() == self.cells.len()
    }

    /// Grid position of a surface square from its centre.
    pub fn cell_of(axis: Axis, center: Coord) -> (usize, usize) {
        let (a1, a2) = in_plane(axis);
        ((center[a1] / 4) as usize, (center[a2] / 4) as usize)
    }
}

pub fn growth_order(size: usize) -> Vec<(usize, usize)> {
    let l = size as i64;
    let mut seen = HashSet::new();
    let mut order = Vec::new();
    for r in 0..=l {
        let ring: Vec<(i64, i64)> = (-r..=r)
            .flat_map(|di| (-r..=r).map(move |dj| (di, dj)))
            .filter(|&(di, dj)| di.abs().max(dj.abs()) == r)
            .collect();
        let (mut edges, corners): (Vec<_>, Vec<_>) = ring
            .into_iter()
            .partition(|&(di, dj)| di.abs() != dj.abs() || r == 0);
        edges.sort_by(|a, b| {
            let ang = |p: &(i64, i64)| (p.1 as f64).atan2(p.0 as f64);
            ang(a).partial_cmp(&ang(b)).unwrap()
        });
        for (di, dj) in edges.into_iter().chain(corners) {
            let cell = (di.rem_euclid(l) as usize, dj.rem_euclid(l) as usize);
            if seen.insert(cell) {
                order.push(cell);
            }
        }
    }
    order
}

/// `Z⁴` on each square of `region`.
pub fn truncated_surface(c: &CellComplex, region: &SurfaceRegion) -> Result<ErrorOperator> {
    if region.size != c.size() {
        return Err(Error::OutOfRange {
            what: "region size",
            detail: format!(
                "region on a {0}x{0} layer, lattice has L = {1}",
                region.size,
                c.size()
            ),
        });
    }
    if !region.is_connected() {
        return Err(Error::DisconnectedRegion);
    }
    let qubits: Vec<usize> = surface_squares(c, region.axis)
        .into_iter()
        .filter(|&f| {
            region
                .cells
                .contains(&SurfaceRegion::cell_of(region.axis, c.faces()[f].center))
        })
        .flat_map(|f| c.faces()[f].vertices.clone())
        .collect();
    Ok(ErrorOperator {
        operator: PauliOperator::uniform(c.num_vertices(), &qubits, PauliLetter::Z),
        provenance: Provenance::TruncatedSurface {
            axis: region.axis,
            squares: region.len(),
            perimeter: region.perimeter(),
        },
    })
}

/// `-1` when the closed trajectory anticommutes with the excitation
/// operator, `+1` otherwise. The trajectory must commute with every
/// plaquette.
pub fn braiding_phase(
    code: &StabilizerCode,
    trajectory: &ErrorOperator,
    excitation: &ErrorOperator,
) -> Result<i8> {
    let s = syndrome(code, trajectory)?;
    if s.weight != 0 {
        return Err(Error::OpenLoop(s.weight));
    }
    if trajectory.operator.num_qubits() != excitation.operator.num_qubits() {
        return Err(Error::LengthMismatch {
            left: trajectory.operator.num_qubits(),
            right: excitation.operator.num_qubits(),
        });
    }
    Ok(
        if trajectory
            .operator
            .anticommutes_unchecked(&excitation.operator)
        {
            -1
        } else {
            1
        },
    )
}

/// Moves an operator by a lattice translation (multiples of 4 keep the
/// complex and its face types invariant).
pub fn translate(c: &CellComplex, op: &PauliOperator, shift: Coord) -> PauliOperator {
    let mut letters = vec![PauliLetter::I; c.num_vertices()];
    for q in op.support() {
        let v = c.vertex(q);
        let w = c
            .vertex_id([v[0] + shift[0], v[1] + shift[1], v[2] + shift[2]])
            .expect("translation maps vertices to vertices");
        letters[w] = op.letter(q);
    }
    PauliOperator::from_letters(&letters)
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct BraidRow {
    pub configuration: &'static str,
    pub crossings: usize,
    pub phase: i8,
}

/// Closed string trajectories against a two-square truncated surface:
/// threading once, missing it, and threading twice.
pub fn braid_table(c: &CellComplex, code: &StabilizerCode, axis: Axis) -> Result<Vec<BraidRow>> {
    let (_, string) = geometric_logicals(c, axis)?;
    let a = axis.index();
    let (a1, a2) = in_plane(axis);
    let crossing = string
        .path
        .iter()
        .copied()
        .find(|&v| c.vertex(v)[a] == crate::code::SURFACE_PLANE)
        .expect("a winding string crosses every layer");
    let square = c
        .vertex_faces(crossing)
        .iter()
        .copied()
        .find(|&f| surface_squares(c, axis).contains(&f))
        .expect("layer vertices lie on layer squares");
    let seed = SurfaceRegion::cell_of(axis, c.faces()[square].center);
    let region = SurfaceRegion::new(axis, c.size(), [seed, (seed.0 + 1, seed.1)]);
    let surface = truncated_surface(c, &region)?;

    let mut along = [0; 3];
    along[a1] = 4;
    let mut across = [0; 3];
    across[a2] = 4;
    let once = string.operator.clone();
    let missed = translate(c, &string.operator, across);
    let twice = once.multiply(&translate(c, &once, along))?;

    [
        ("linked", 1, once),
        ("unlinked", 0, missed),
        ("doubly linked", 2, twice),
    ]
    .into_iter()
    .map(|(name, crossings, op)| {
        Ok(BraidRow {
            configuration: name,
            crossings,
            phase: braiding_phase(code, &ErrorOperator::custom(op), &surface)?,
        })
    })
    .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ScanKind {
    String,
    Surface,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanRow {
    pub size: usize,
    pub weight: usize,
    pub energy: f64,
    /// Boundary length for surfaces, `0` for strings.
    pub perimeter: usize,
}

/// Syndrome weight and energy along the canonical build-up of a truncated
/// string (`size` = letters placed, 2 through `4L`) or a truncated surface
/// (`size` = squares placed, 1 through `L²`).
pub fn barrier_scan(
    c: &CellComplex,
    code: &StabilizerCode,
    kind: ScanKind,
    axis: Axis,
    coupling: f64,
) -> Result<Vec<ScanRow>> {
    let l = c.size();
    let mut rows = Vec::new();
    match kind {
        ScanKind::String => {
            let (_, string) = geometric_logicals(c, axis)?;
            for len in 2..=string.path.len() {
                let err = truncate(&string, len)?;
                let s = syndrome(code, &err)?;
                rows.push(ScanRow {
                    size: len,
                    weight: s.weight,
                    energy: energy_of(code, &s, coupling),
                    perimeter: 0,
                });
            }
        }
        ScanKind::Surface => {
            for count in 1..=l * l {
                let region = SurfaceRegion::grown(axis, l, count);
                let err = truncated_surface(c, &region)?;
                let s = syndrome(code, &err)?;
                rows.push(ScanRow {
                    size: count,
                    weight: s.weight,
                    energy: energy_of(code, &s, coupling),
                    perimeter: region.perimeter(),
                });
            }
        }
    }
    Ok(rows)
}

/// Largest energy above the ground state along a scan.
pub fn energy_barrier(rows: &[ScanRow], coupling: f64) -> f64 {
    rows.iter().map(|r| r.weight).max().unwrap_or(0) as f64 * 2.0 * coupling
}

/// Pearson correlation and least-squares slope of `y` against `x`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let syy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    (sxy / (sxx * syy).sqrt(), sxy / sxx)
}

/// Graph distance (along edges) from the nearest of `sources`.
pub fn vertex_distances(c: &CellComplex, sources: &[usize]) -> Vec<usize> {
    let mut dist = vec![usize::MAX; c.num_vertices()];
    let mut queue = VecDeque::new();
    for &s in sources {
        dist[s] = 0;
        queue.push_back(s);
    }
    while let Some(v) = queue.pop_front() {
        for w in c.neighbors(v) {
            if dist[w] == usize::MAX {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
        }
    }
    dist
}
