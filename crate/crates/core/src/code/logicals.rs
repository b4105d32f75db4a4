//! Logical operators: an algebraic basis from the centralizer, and the
//! geometric surface/string pairs of each lattice direction.

use serde::Serialize;

use super::StabilizerCode;
use crate::error::{Error, Result};
use crate::lattice::{CellComplex, FaceShape};
use crate::pauli::{BinaryMatrix, BitVec, Echelon, PauliLetter, PauliOperator};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn as_char(self) -> char {
        ['x', 'y', 'z'][self.index()]
    }

    pub fn from_char(c: char) -> Option<Axis> {
        match c.to_ascii_lowercase() {
            'x' => Some(Axis::X),
            'y' => Some(Axis::Y),
            'z' => Some(Axis::Z),
            _ => None,
        }
    }
}

/// Letters along a string logical, repeating with period four.
pub const STRING_PATTERN: [PauliLetter; 4] = [
    PauliLetter::Y,
    PauliLetter::Z,
    PauliLetter::Y,
    PauliLetter::X,
];

/// Plane (in units of the coordinate along the axis) holding the surface
/// operator of each direction.
pub const SURFACE_PLANE: i64 = 2;

#[derive(Clone, Debug, PartialEq)]
pub struct LogicalPair {
    pub first: PauliOperator,
    pub second: PauliOperator,
    pub axis: Option<Axis>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LogicalSet {
    pub pairs: Vec<LogicalPair>,
}

impl LogicalSet {
    /// Operators in pair order: `first₀, second₀, first₁, …`.
    pub fn operators(&self) -> Vec<&PauliOperator> {
        self.pairs
            .iter()
            .flat_map(|p| [&p.first, &p.second])
            .collect()
    }
}

/// A closed path winding once along `axis`, one vertex per unit step of the
/// axis coordinate, with the letters placed on it.
#[derive(Clone, Debug, PartialEq)]
pub struct StringLogical {
    pub axis: Axis,
    pub path: Vec<usize>,
    pub letters: Vec<PauliLetter>,
    pub operator: PauliOperator,
}

impl StringLogical {
    /// Operator on the first `len` path vertices.
    pub fn truncated(&self, len: usize) -> PauliOperator {
        let n = self.operator.num_qubits();
        let mut letters = vec![PauliLetter::I; n];
        for (&v, &l) in self.path.iter().zip(&self.letters).take(len) {
            letters[v] = l;
        }
        PauliOperator::from_letters(&letters)
    }

    pub fn has_period_four_pattern(&self) -> bool {
        matches_pattern(&self.letters)
    }
}

/// `letters` is a cyclic shift of `Y,Z,Y,X,Y,Z,Y,X,…`.
pub fn matches_pattern(letters: &[PauliLetter]) -> bool {
    (0..4).any(|shift| {
        letters
            .iter()
            .enumerate()
            .all(|(t, &l)| l == STRING_PATTERN[(t + shift) % 4])
    })
}

/// Y-squares normal to `axis` in the plane `coord[axis] = SURFACE_PLANE`.
pub fn surface_squares(c: &CellComplex, axis: Axis) -> Vec<usize> {
    let a = axis.index();
    c.faces()
        .iter()
        .enumerate()
        .filter(|(_, f)| {
            f.shape == FaceShape::Square && f.normal[a] != 0 && f.center[a] == SURFACE_PLANE
        })
        .map(|(i, _)| i)
        .collect()
}

/// `Z⁴` on every square of one layer normal to `axis`.
pub fn surface_operator(c: &CellComplex, axis: Axis) -> PauliOperator {
    let qubits: Vec<usize> = surface_squares(c, axis)
        .iter()
        .flat_map(|&f| c.faces()[f].vertices.iter().copied())
        .collect();
    PauliOperator::uniform(c.num_vertices(), &qubits, PauliLetter::Z)
}

struct StringSearch<'a> {
    c: &'a CellComplex,
    axis: usize,
    length: usize,
    offset: usize,
    path: Vec<usize>,
    parity: Vec<bool>,
}

impl StringSearch<'_> {
    fn level(&self, v: usize) -> i64 {
        self.c.vertex(v)[self.axis]
    }

    fn letter(&self, t: usize) -> PauliLetter {
        STRING_PATTERN[(t + self.offset) % 4]
    }

    fn toggle(&mut self, v: usize, letter: PauliLetter) {
        for &f in self.c.vertex_faces(v) {
            if self.c.faces()[f].kind != letter {
                self.parity[f] ^= true;
            }
        }
    }

    fn up_neighbors(&self, v: usize) -> Vec<usize> {
        let m = self.c.modulus();
        let next = (self.level(v) + 1).rem_euclid(m);
        let mut out: Vec<usize> = self
            .c
            .neighbors(v)
            .filter(|&w| self.level(w) == next)
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    fn settled(&self, v: usize) -> bool {
        self.c.vertex_faces(v).iter().all(|&f| !self.parity[f])
    }

    /// Depth-first extension; faces around the vertex placed two steps back
    /// can no longer change and must already commute.
    fn extend(&mut self, accept: &mut dyn FnMut(&[usize], usize) -> bool) -> bool {
        let t = self.path.len();
        let last = *self.path.last().unwrap();
        if t == self.length {
            let closes = self.up_neighbors(last).contains(&self.path[0]);
            return closes && self.parity.iter().all(|&p| !p) && accept(&self.path, self.offset);
        }
        for w in self.up_neighbors(last) {
            let l = self.letter(t);
            self.toggle(w, l);
            self.path.push(w);
            let ok = t < 4 || self.settled(self.path[t - 2]);
            if ok && self.extend(accept) {
                return true;
            }
            self.path.pop();
            self.toggle(w, l);
        }
        false
    }
}

/// First closed string along `axis` (canonical start vertex, pattern offset,
/// and branch order) that commutes with every plaquette and satisfies
/// `accept`.
pub fn find_string(
    c: &CellComplex,
    axis: Axis,
    mut accept: impl FnMut(&PauliOperator) -> bool,
) -> Option<StringLogical> {
    let a = axis.index();
    let length = c.modulus() as usize;
    let n = c.num_vertices();
    let starts: Vec<usize> = (0..n).filter(|&v| c.vertex(v)[a] == 0).collect();
    for &start in &starts {
        for offset in 0..4 {
            let mut search = StringSearch {
                c,
                axis: a,
                length,
                offset,
                path: vec![start],
                parity: vec![false; c.num_faces()],
            };
            let first = search.letter(0);
            search.toggle(start, first);
            let mut found = None;
            let mut check = |path: &[usize], offset: usize| {
                let letters: Vec<PauliLetter> = (0..path.len())
                    .map(|t| STRING_PATTERN[(t + offset) % 4])
                    .collect();
                let mut full = vec![PauliLetter::I; n];
                for (&v, &l) in path.iter().zip(&letters) {
                    full[v] = l;
                }
                let op = PauliOperator::from_letters(&full);
                if accept(&op) {
                    found = Some(StringLogical {
                        axis,
                        path: path.to_vec(),
                        letters,
                        operator: op,
                    });
                    true
                } else {
                    false
                }
            };
            if search.extend(&mut check) {
                return found;
            }
        }
    }
    None
}

/// Surface and string logical for one direction. The string anticommutes
/// with this direction's surface and commutes with the other two surfaces.
pub fn geometric_logicals(c: &CellComplex, axis: Axis) -> Result<(PauliOperator, StringLogical)> {
    let surfaces: Vec<PauliOperator> = Axis::ALL.iter().map(|&a| surface_operator(c, a)).collect();
    let string = find_string(c, axis, |op| {
        Axis::ALL
            .iter()
            .all(|&b| surfaces[b.index()].anticommutes_unchecked(op) == (b == axis))
    })
    .ok_or(Error::NoStringPath(axis.as_char()))?;
    Ok((surfaces[axis.index()].clone(), string))
}

/// Geometric pairs for all three directions.
pub fn geometric_logical_set(c: &CellComplex) -> Result<LogicalSet> {
    let pairs = Axis::ALL
        .iter()
        .map(|&axis| {
            geometric_logicals(c, axis).map(|(s, t)| LogicalPair {
                first: s,
                second: t.operator,
                axis: Some(axis),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LogicalSet { pairs })
}

fn sp(a: &BitVec, b: &BitVec, n: usize) -> bool {
    let (ax, az) = (a.slice(0, n), a.slice(n, n));
    let (bx, bz) = (b.slice(0, n), b.slice(n, n));
    (ax.and_count(&bz) + az.and_count(&bx)) % 2 == 1
}

/// Centralizer modulo the stabilizer, brought to hyperbolic pairs by
/// symplectic Gram–Schmidt.
pub fn logical_basis(code: &StabilizerCode) -> LogicalSet {
    let n = code.num_qubits();
    let swapped = BinaryMatrix::from_rows(
        2 * n,
        code.generator_matrix()
            .rows()
            .iter()
            .map(|r| r.slice(n, n).concat(&r.slice(0, n)))
            .collect(),
    );
    let centralizer = swapped.nullspace();
    let mut span = Echelon::from_rows(2 * n, code.generator_matrix().rows().iter().cloned());
    let mut pool: Vec<BitVec> = Vec::new();
    for v in centralizer {
        if span.insert(v.clone()) {
            pool.push(v);
        }
    }

    let mut pairs = Vec::new();
    while let Some(u) = (!pool.is_empty()).then(|| pool.remove(0)) {
        let j = pool
            .iter()
            .position(|w| sp(&u, w, n))
            .expect("logical space is symplectic");
        let v = pool.remove(j);
        for w in pool.iter_mut() {
            let (wu, wv) = (sp(w, &u, n), sp(w, &v, n));
            if wv {
                w.xor_assign(&u);
            }
            if wu {
                w.xor_assign(&v);
            }
        }
        pairs.push(LogicalPair {
            first: PauliOperator::from_symplectic(&u),
            second: PauliOperator::from_symplectic(&v),
            axis: None,
        });
    }
    LogicalSet { pairs }
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct PairingReport {
    /// Symplectic Gram matrix in pair order.
    pub matrix: Vec<Vec<u8>>,
    pub standard_form: bool,
    pub commute_with_stabilizers: bool,
    pub outside_stabilizer_span: bool,
    /// Every member reduces to zero modulo the stabilizer plus the algebraic
    /// basis, and together they span the same quotient.
    pub congruent_to_algebraic: bool,
}

impl PairingReport {
    pub fn passed(&self) -> bool {
        self.standard_form
            && self.commute_with_stabilizers
            && self.outside_stabilizer_span
            && self.congruent_to_algebraic
    }
}

pub fn verify_logical_pairing(logicals: &LogicalSet, code: &StabilizerCode) -> PairingReport {
    let n = code.num_qubits();
    let ops = logicals.operators();
    let vecs: Vec<BitVec> = ops.iter().map(|o| o.symplectic()).collect();
    let matrix: Vec<Vec<u8>> = vecs
        .iter()
        .map(|a| vecs.iter().map(|b| u8::from(sp(a, b, n))).collect())
        .collect();
    let standard_form = matrix.iter().enumerate().all(|(i, row)| {
        row.iter()
            .enumerate()
            .all(|(j, &x)| x == u8::from(i / 2 == j / 2 && i != j))
    });

    let stab = Echelon::from_rows(2 * n, code.generator_matrix().rows().iter().cloned());
    let outside_stabilizer_span = vecs.iter().all(|v| !stab.contains(v));

    let algebraic = logical_basis(code);
    let mut with_alg = stab.clone();
    for op in algebraic.operators() {
        with_alg.insert(op.symplectic());
    }
    let mut with_given = stab.clone();
    for v in &vecs {
        with_given.insert(v.clone());
    }
    let congruent_to_algebraic =
        vecs.iter().all(|v| with_alg.contains(v)) && with_given.rank() == with_alg.rank();

    PairingReport {
        matrix,
        standard_form,
        commute_with_stabilizers: ops.iter().all(|o| code.commutes_with_all(o)),
        outside_stabilizer_span,
        congruent_to_algebraic,
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
    fn algebraic_basis_at_l2() {
        let (_, code) = setup(2);
        let set = logical_basis(&code);
        assert_eq!(set.pairs.len(), 3);
        for op in set.operators() {
            assert!(code.commutes_with_all(op));
            assert!(!code.in_stabilizer_span(op));
        }
        assert!(verify_logical_pairing(&set, &code).passed());
    }

    #[test]
    fn surfaces_are_logical() {
        let (c, code) = setup(2);
        for axis in Axis::ALL {
            let s = surface_operator(&c, axis);
            assert_eq!(s.weight(), 4 * 4);
            assert!(code.commutes_with_all(&s));
            assert!(!code.in_stabilizer_span(&s));
        }
    }

    #[test]
    fn strings_follow_yzyx() {
        for l in [2, 3] {
            let (c, code) = setup(l);
            for axis in Axis::ALL {
                let (surface, string) = geometric_logicals(&c, axis).unwrap();
                assert_eq!(string.path.len(), 4 * l as usize);
                assert!(string.has_period_four_pattern());
                assert!(code.commutes_with_all(&string.operator));
                assert!(surface.anticommutes_unchecked(&string.operator));
            }
        }
    }

    #[test]
    fn geometric_set_has_standard_pairing() {
        let (c, code) = setup(2);
        let set = geometric_logical_set(&c).unwrap();
        let report = verify_logical_pairing(&set, &code);
        assert!(report.passed(), "{report:?}");
    }

    #[test]
    fn surface_x_commutes_with_string_y() {
        let (c, _) = setup(2);
        let sx = surface_operator(&c, Axis::X);
        let (_, ty) = geometric_logicals(&c, Axis::Y).unwrap();
        assert!(!sx.anticommutes_unchecked(&ty.operator));
    }

    #[test]
    fn pairing_is_invariant_under_stabilizer_multiplication() {
        let (c, code) = setup(2);
        let set = geometric_logical_set(&c).unwrap();
        let base = verify_logical_pairing(&set, &code).matrix;
        let mut moved = set.clone();
        for (i, pair) in moved.pairs.iter_mut().enumerate() {
            pair.first.mul_assign(&code.generators()[3 * i]);
            pair.second.mul_assign(&code.generators()[5 * i + 1]);
            pair.second.mul_assign(&code.generators()[7 * i + 2]);
        }
        let report = verify_logical_pairing(&moved, &code);
        assert_eq!(report.matrix, base);
        assert!(report.passed());
    }

    #[test]
    fn stabilizer_in_place_of_logical_is_rejected() {
        let (c, code) = setup(2);
        let mut set = geometric_logical_set(&c).unwrap();
        set.pairs[1].first = code.generators()[0].clone();
        let report = verify_logical_pairing(&set, &code);
        assert!(!report.outside_stabilizer_span);
        assert!(!report.passed());
    }

    #[test]
    fn pattern_matcher() {
        use PauliLetter::*;
        assert!(matches_pattern(&[Z, Y, X, Y, Z, Y, X, Y]));
        assert!(!matches_pattern(&[Y, Y, X, Y]));
    }
}
