//! The plaquette stabilizer code: generators, rank, kernel, the sign of
//! kernel products, and the relation census.

mod logicals;
mod relations;

pub use logicals::{
    find_string, geometric_logical_set, geometric_logicals, logical_basis, matches_pattern,
    surface_operator, surface_squares, verify_logical_pairing, Axis, LogicalPair, LogicalSet,
    PairingReport, StringLogical, STRING_PATTERN, SURFACE_PLANE,
};
pub use relations::{
    cell_boundary_vectors, closed_surface_basis, face_edge_matrix, relation_census, type_mask,
    RelationCensus,
};

use crate::error::{Error, Result};
use crate::lattice::CellComplex;
use crate::pauli::{BinaryMatrix, BitVec, PauliOperator};

/// `B_p` for face `p`: the face's letter on each of its vertices.
pub fn plaquette_operator(complex: &CellComplex, face: usize) -> Result<PauliOperator> {
    let f = complex.face(face)?;
    Ok(PauliOperator::uniform(
        complex.num_vertices(),
        &f.vertices,
        f.kind,
    ))
}

#[derive(Clone, Debug)]
pub struct StabilizerCode {
    num_qubits: usize,
    generators: Vec<PauliOperator>,
    matrix: BinaryMatrix,
    rank: usize,
    kernel_basis: Vec<BitVec>,
}

impl StabilizerCode {
    /// Builds a code from arbitrary generators, checking every pair commutes.
    pub fn from_generators(num_qubits: usize, generators: Vec<PauliOperator>) -> Result<Self> {
        for g in &generators {
            if g.num_qubits() != num_qubits {
                return Err(Error::LengthMismatch {
                    left: num_qubits,
                    right: g.num_qubits(),
                });
            }
        }
        for i in 0..generators.len() {
            for j in i + 1..generators.len() {
                if generators[i].anticommutes_unchecked(&generators[j]) {
                    return Err(Error::Anticommuting(i, j));
                }
            }
        }
        Ok(Self::assemble(num_qubits, generators))
    }

    fn assemble(num_qubits: usize, generators: Vec<PauliOperator>) -> Self {
        let matrix = BinaryMatrix::from_rows(
            2 * num_qubits,
            generators.iter().map(PauliOperator::symplectic).collect(),
        );
        let kernel_basis = matrix.kernel_basis();
        let rank = generators.len() - kernel_basis.len();
        Self {
            num_qubits,
            generators,
            matrix,
            rank,
            kernel_basis,
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn generators(&self) -> &[PauliOperator] {
        &self.generators
    }

    pub fn generator_matrix(&self) -> &BinaryMatrix {
        &self.matrix
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn kernel_basis(&self) -> &[BitVec] {
        &self.kernel_basis
    }

    pub fn kernel_dim(&self) -> usize {
        self.kernel_basis.len()
    }

    pub fn encoded_qubits(&self) -> usize {
        self.num_qubits - self.rank
    }

    /// Ordered product of the generators selected by `subset`.
    pub fn product(&self, subset: &BitVec) -> PauliOperator {
        assert_eq!(subset.len(), self.generators.len());
        let mut acc = PauliOperator::identity(self.num_qubits);
        for i in subset.iter_ones() {
            acc.mul_assign(&self.generators[i]);
        }
        acc
    }

    /// Bit `p` set when `op` anticommutes with generator `p`.
    pub fn syndrome_bits(&self, op: &PauliOperator) -> BitVec {
        BitVec::from_bools(
            &self
                .generators
                .iter()
                .map(|g| g.anticommutes_unchecked(op))
                .collect::<Vec<_>>(),
        )
    }

    pub fn commutes_with_all(&self, op: &PauliOperator) -> bool {
        self.generators
            .iter()
            .all(|g| !g.anticommutes_unchecked(op))
    }

    /// Whether `op`'s symplectic vector lies in the generator row space.
    pub fn in_stabilizer_span(&self, op: &PauliOperator) -> bool {
        self.matrix.row_space_contains(&op.symplectic())
    }
}

/// Generators from every face in id order. Only face pairs sharing a vertex
/// are checked for commutation; all other pairs have disjoint support.
pub fn build_code(complex: &CellComplex) -> Result<StabilizerCode> {
    let generators = (0..complex.num_faces())
        .map(|f| plaquette_operator(complex, f))
        .collect::<Result<Vec<_>>>()?;
    for v in 0..complex.num_vertices() {
        let around = complex.vertex_faces(v);
        for (i, &f) in around.iter().enumerate() {
            for &g in &around[i + 1..] {
                if generators[f].anticommutes_unchecked(&generators[g]) {
                    return Err(Error::Anticommuting(f.min(g), f.max(g)));
                }
            }
        }
    }
    Ok(StabilizerCode::assemble(complex.num_vertices(), generators))
}

pub fn encoded_qubits(code: &StabilizerCode) -> usize {
    code.encoded_qubits()
}

/// True iff every kernel-basis product is exactly `+I`. Generators square to
/// `+I` and commute, so products over the whole kernel follow.
pub fn verify_no_minus_identity(code: &StabilizerCode) -> bool {
    code.kernel_basis()
        .iter()
        .all(|v| code.product(v).is_identity())
}

/// Product of the 14 plaquettes of one cell.
pub fn cell_product(complex: &CellComplex, code: &StabilizerCode, cell: usize) -> PauliOperator {
    let faces = &complex.cells()[cell].faces;
    code.product(&BitVec::from_indices(
        complex.num_faces(),
        faces.iter().copied(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{build_lattice, FaceShape, LatticeSpec};
    use crate::pauli::PauliLetter;

    fn lattice(l: i64) -> CellComplex {
        build_lattice(LatticeSpec::new(l).unwrap())
    }

    #[test]
    fn plaquette_letters_and_phases() {
        let c = lattice(2);
        for (f, face) in c.faces().iter().enumerate() {
            let op = plaquette_operator(&c, f).unwrap();
            let w = if face.shape == FaceShape::Square {
                4
            } else {
                6
            };
            assert_eq!(op.weight(), w);
            assert_eq!(op.phase_exp(), 0);
            assert!(op.support().iter().all(|&q| op.letter(q) == face.kind));
        }
        assert!(matches!(
            plaquette_operator(&c, 10_000),
            Err(Error::UnknownFace(10_000))
        ));
    }

    #[test]
    fn l2_parameters() {
        let code = build_code(&lattice(2)).unwrap();
        assert_eq!(code.generators().len(), 112);
        assert_eq!(code.num_qubits(), 96);
        assert_eq!(code.rank(), 93);
        assert_eq!(code.kernel_dim(), 19);
        assert_eq!(encoded_qubits(&code), 3);
    }

    #[test]
    fn l3_has_three_encoded_qubits() {
        let c = lattice(3);
        let code = build_code(&c).unwrap();
        assert_eq!(code.rank(), 14 * 27 - (2 * 27 + 3));
        assert_eq!(encoded_qubits(&code), 3);
        assert!(verify_no_minus_identity(&code));
    }

    #[test]
    fn full_pairwise_commutation_at_l2() {
        let c = lattice(2);
        let code = build_code(&c).unwrap();
        let again = StabilizerCode::from_generators(96, code.generators().to_vec()).unwrap();
        assert_eq!(again.rank(), code.rank());
    }

    #[test]
    fn retyped_hexagon_breaks_commutation() {
        let mut c = lattice(2);
        let f = c.faces_of_kind(PauliLetter::X).next().unwrap();
        c.retype_face(f, PauliLetter::Z).unwrap();
        assert!(matches!(build_code(&c), Err(Error::Anticommuting(..))));
    }

    #[test]
    fn empty_generator_set_encodes_everything() {
        let code = StabilizerCode::from_generators(7, vec![]).unwrap();
        assert_eq!(encoded_qubits(&code), 7);
        assert!(verify_no_minus_identity(&code));
    }

    #[test]
    fn xx_yy_zz_contains_minus_identity() {
        let p = |s: &str| {
            PauliOperator::from_letters(
                &s.chars()
                    .map(|c| PauliLetter::from_char(c).unwrap())
                    .collect::<Vec<_>>(),
            )
        };
        let code = StabilizerCode::from_generators(2, vec![p("XX"), p("YY"), p("ZZ")]).unwrap();
        assert_eq!(code.kernel_dim(), 1);
        assert!(!verify_no_minus_identity(&code));
        let prod = code.product(&code.kernel_basis()[0]);
        assert!(prod.is_scalar());
        assert_eq!(prod.phase_exp(), 2);
    }

    #[test]
    fn single_cell_product_is_plus_identity() {
        let c = lattice(2);
        let code = build_code(&c).unwrap();
        for cell in 0..c.num_cells() {
            let p = cell_product(&c, &code, cell);
            assert!(p.is_identity(), "cell {cell}: {p:?}");
        }
    }

    #[test]
    fn unordered_cell_product_phase_is_i_to_the_24() {
        // X-, then Y-, then Z-faces: each of the 24 vertices sees X·Y·Z = i.
        let c = lattice(2);
        let n = c.num_vertices();
        let cell = &c.cells()[0];
        let mut acc = PauliOperator::identity(n);
        for kind in [PauliLetter::X, PauliLetter::Y, PauliLetter::Z] {
            for &f in &cell.faces {
                if c.faces()[f].kind == kind {
                    acc = acc.multiply(&plaquette_operator(&c, f).unwrap()).unwrap();
                }
            }
        }
        assert!(acc.is_scalar());
        assert_eq!(acc.phase_exp(), 0);
    }
}
