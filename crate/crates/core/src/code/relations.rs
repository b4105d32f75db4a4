use serde::Serialize;

use super::StabilizerCode;
use crate::lattice::CellComplex;
use crate::pauli::{BinaryMatrix, BitVec, Echelon, PauliLetter};

/// Face-by-edge incidence over GF(2).
pub fn face_edge_matrix(c: &CellComplex) -> BinaryMatrix {
    BinaryMatrix::from_rows(
        c.num_edges(),
        c.faces()
            .iter()
            .map(|f| BitVec::from_indices(c.num_edges(), f.edges.iter().copied()))
            .collect(),
    )
}

/// Basis of face subsets with even incidence on every edge.
pub fn closed_surface_basis(c: &CellComplex) -> Vec<BitVec> {
    face_edge_matrix(c).kernel_basis()
}

/// Face set of each cell, reduced mod 2.
pub fn cell_boundary_vectors(c: &CellComplex) -> Vec<BitVec> {
    c.cells()
        .iter()
        .map(|cell| BitVec::from_indices(c.num_faces(), cell.faces.iter().copied()))
        .collect()
}

pub fn type_mask(c: &CellComplex, kind: PauliLetter) -> BitVec {
    BitVec::from_indices(c.num_faces(), c.faces_of_kind(kind))
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct RelationCensus {
    pub kernel_dim: usize,
    /// Span of the cell boundaries (contractible surfaces).
    pub cell_boundary_dim: usize,
    /// All edge-even face subsets.
    pub closed_surface_dim: usize,
    /// `closed_surface_dim - cell_boundary_dim`.
    pub noncontractible_dim: usize,
    pub closed_surfaces_in_kernel: bool,
    pub all_x_in_kernel: bool,
    pub all_x_is_closed_surface: bool,
    /// All-Y and all-Z products lie in the span of closed surfaces and all-X.
    pub all_y_z_implied: bool,
}

impl RelationCensus {
    /// Kernel = closed surfaces ⊕ all-X.
    pub fn accounts_for_kernel(&self) -> bool {
        self.closed_surfaces_in_kernel
            && self.all_x_in_kernel
            && !self.all_x_is_closed_surface
            && self.all_y_z_implied
            && self.kernel_dim == self.closed_surface_dim + 1
    }
}

pub fn relation_census(c: &CellComplex, code: &StabilizerCode) -> RelationCensus {
    let f = c.num_faces();
    let in_kernel = |v: &BitVec| code.product(v).is_scalar();
    let closed = closed_surface_basis(c);
    let cells = Echelon::from_rows(f, cell_boundary_vectors(c));
    let mut span = Echelon::from_rows(f, closed.iter().cloned());
    let all_x = type_mask(c, PauliLetter::X);
    let all_x_is_closed_surface = span.contains(&all_x);
    span.insert(all_x.clone());
    RelationCensus {
        kernel_dim: code.kernel_dim(),
        cell_boundary_dim: cells.rank(),
        closed_surface_dim: closed.len(),
        noncontractible_dim: closed.len() - cells.rank(),
        closed_surfaces_in_kernel: closed.iter().all(in_kernel),
        all_x_in_kernel: in_kernel(&all_x),
        all_x_is_closed_surface,
        all_y_z_implied: [PauliLetter::Y, PauliLetter::Z]
            .iter()
            .all(|&k| span.contains(&type_mask(c, k))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::build_code;
    use crate::lattice::{build_lattice, LatticeSpec};

    #[test]
    fn census_at_l2() {
        let c = build_lattice(LatticeSpec::new(2).unwrap());
        let code = build_code(&c).unwrap();
        let r = relation_census(&c, &code);
        assert_eq!(r.kernel_dim, 19);
        assert_eq!(r.cell_boundary_dim, 15);
        assert_eq!(r.closed_surface_dim, 18);
        assert_eq!(r.noncontractible_dim, 3);
        assert!(r.accounts_for_kernel(), "{r:?}");
    }

    #[test]
    fn census_at_l3() {
        let c = build_lattice(LatticeSpec::new(3).unwrap());
        let code = build_code(&c).unwrap();
        let r = relation_census(&c, &code);
        assert_eq!(r.cell_boundary_dim, 53);
        assert_eq!(r.noncontractible_dim, 3);
        assert!(r.accounts_for_kernel(), "{r:?}");
    }

    #[test]
    fn every_edge_sees_one_face_of_each_type() {
        let c = build_lattice(LatticeSpec::new(2).unwrap());
        for e in 0..c.num_edges() {
            let mut kinds: Vec<_> = c.edge_faces(e).iter().map(|&f| c.faces()[f].kind).collect();
            kinds.sort();
            assert_eq!(kinds, vec![PauliLetter::X, PauliLetter::Y, PauliLetter::Z]);
        }
    }
}
