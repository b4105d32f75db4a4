use std::collections::HashMap;

use serde::Serialize;

use super::{CellComplex, FaceShape};
use crate::pauli::PauliLetter;

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Per-invariant pass/fail. Failures are recorded, never raised.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct ValidationReport {
    pub checks: Vec<CheckResult>,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

fn kind_index(k: PauliLetter) -> usize {
    match k {
        PauliLetter::X => 0,
        PauliLetter::Y => 1,
        PauliLetter::Z => 2,
        PauliLetter::I => 3,
    }
}

pub(super) fn validate_complex(c: &CellComplex) -> ValidationReport {
    let mut checks = Vec::new();
    let mut push = |name, passed, detail: String| {
        checks.push(CheckResult {
            name,
            passed,
            detail,
        })
    };

    let l3 = c.size().pow(3);
    let counts = (
        c.num_vertices(),
        c.num_edges(),
        c.num_faces(),
        c.num_cells(),
    );
    let expected = (12 * l3, 24 * l3, 14 * l3, 2 * l3);
    push(
        "counts",
        counts == expected,
        format!("(V,E,F,C) = {counts:?}, expected {expected:?}"),
    );

    let chi = c.euler_characteristic();
    push("euler", chi == 0, format!("V-E+F-C = {chi}"));

    let bad_squares = c
        .faces()
        .iter()
        .filter(|f| (f.shape == FaceShape::Square) != (f.kind == PauliLetter::Y))
        .count();
    let (nx, _, nz) = c.kind_counts();
    push(
        "face_types",
        bad_squares == 0 && nx == nz,
        format!("{bad_squares} square/Y mismatches, {nx} X vs {nz} Z hexagons"),
    );

    let bad_vertices = (0..c.num_vertices())
        .filter(|&v| {
            let mut census = [0usize; 4];
            for &f in c.vertex_faces(v) {
                census[kind_index(c.faces()[f].kind)] += 1;
            }
            census != [2, 2, 2, 0]
        })
        .count();
    push(
        "vertex_census",
        bad_vertices == 0,
        format!("{bad_vertices} vertices without 2X/2Y/2Z faces"),
    );

    let bad_edges = (0..c.num_edges())
        .filter(|&e| c.edge_faces(e).len() != 3)
        .count();
    push(
        "edge_faces",
        bad_edges == 0,
        format!("{bad_edges} edges not on exactly 3 faces"),
    );

    let mut bad_cell_vertices = 0;
    for cell in c.cells() {
        for &v in &cell.vertices {
            let mut census = [0usize; 4];
            for &f in &cell.faces {
                if c.faces()[f].vertices.contains(&v) {
                    census[kind_index(c.faces()[f].kind)] += 1;
                }
            }
            if census != [1, 1, 1, 0] {
                bad_cell_vertices += 1;
            }
        }
    }
    push(
        "cell_vertex_coverage",
        bad_cell_vertices == 0,
        format!("{bad_cell_vertices} (cell, vertex) slots without one X, one Y and one Z face"),
    );

    let mut same_bad = 0;
    let mut cross_bad = 0;
    for f in 0..c.num_faces() {
        let mut overlap: HashMap<usize, usize> = HashMap::new();
        for &v in &c.faces()[f].vertices {
            for &g in c.vertex_faces(v) {
                if g > f {
                    *overlap.entry(g).or_default() += 1;
                }
            }
        }
        for (g, n) in overlap {
            if c.faces()[f].kind == c.faces()[g].kind {
                same_bad += usize::from(n != 1);
            } else {
                cross_bad += usize::from(n != 2);
            }
        }
    }
    push(
        "face_overlaps",
        same_bad == 0 && cross_bad == 0,
        format!(
            "{same_bad} same-type pairs not meeting at 1 vertex, {cross_bad} cross-type pairs not meeting at 2"
        ),
    );

    ValidationReport { checks }
}

#[cfg(test)]
mod tests {
    use crate::lattice::{build_lattice, LatticeSpec};
    use crate::pauli::PauliLetter;

    #[test]
    fn l2_and_l3_pass_every_check() {
        for l in [2, 3] {
            let r = build_lattice(LatticeSpec::new(l).unwrap()).validate();
            assert!(r.all_passed(), "{:?}", r.failures().collect::<Vec<_>>());
        }
    }

    #[test]
    fn flipped_hexagon_fails_overlap_check() {
        let mut c = build_lattice(LatticeSpec::new(2).unwrap());
        let f = c.faces_of_kind(PauliLetter::X).next().unwrap();
        c.retype_face(f, PauliLetter::Z).unwrap();
        let r = c.validate();
        assert!(!r.check("face_overlaps").unwrap().passed);
        assert!(!r.check("vertex_census").unwrap().passed);
        assert!(r.check("euler").unwrap().passed);
    }

    #[test]
    fn adjacent_x_and_z_hexagons_share_an_edge() {
        let c = build_lattice(LatticeSpec::new(2).unwrap());
        let x = c.faces_of_kind(PauliLetter::X).next().unwrap();
        let xs = &c.faces()[x];
        let mut found = 0;
        for z in c.faces_of_kind(PauliLetter::Z) {
            let shared: Vec<_> = c.faces()[z]
                .vertices
                .iter()
                .filter(|v| xs.vertices.contains(v))
                .collect();
            if !shared.is_empty() {
                assert_eq!(shared.len(), 2);
                let common_edge = c.faces()[z].edges.iter().any(|e| xs.edges.contains(e));
                assert!(common_edge);
                found += 1;
            }
        }
        assert!(found > 0);
    }
}
