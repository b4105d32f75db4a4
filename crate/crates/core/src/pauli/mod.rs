//! n-qubit Pauli operators with exact phase tracking, plus the GF(2)
//! machinery used to analyse groups of them.
//!
//! An operator is stored as `i^phase · Π_q X_q^{x_q} Z_q^{z_q}` with the X
//! factor to the left of the Z factor on every qubit. With this normal order
//! `Y = iXZ`, so `XYZ = iI`.

mod bits;
mod matrix;

use std::fmt;

pub use bits::BitVec;
pub use matrix::{rref, BinaryMatrix, Echelon};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PauliLetter {
    I,
    X,
    Y,
    Z,
}

impl PauliLetter {
    pub fn bits(self) -> (bool, bool) {
        match self {
            PauliLetter::I => (false, false),
            PauliLetter::X => (true, false),
            PauliLetter::Y => (true, true),
            PauliLetter::Z => (false, true),
        }
    }

    pub fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => PauliLetter::I,
            (true, false) => PauliLetter::X,
            (true, true) => PauliLetter::Y,
            (false, true) => PauliLetter::Z,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            PauliLetter::I => 'I',
            PauliLetter::X => 'X',
            PauliLetter::Y => 'Y',
            PauliLetter::Z => 'Z',
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'I' | '_' => Some(PauliLetter::I),
            'X' => Some(PauliLetter::X),
            'Y' => Some(PauliLetter::Y),
            'Z' => Some(PauliLetter::Z),
            _ => None,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliOperator {
    x: BitVec,
    z: BitVec,
    phase: u8,
}

impl PauliOperator {
    pub fn identity(n: usize) -> Self {
        Self {
            x: BitVec::zeros(n),
            z: BitVec::zeros(n),
            phase: 0,
        }
    }

    pub fn from_parts(x: BitVec, z: BitVec, phase_exp: u32) -> Result<Self> {
        if x.len() != z.len() {
            return Err(Error::LengthMismatch {
                left: x.len(),
                right: z.len(),
            });
        }
        Ok(Self {
            x,
            z,
            phase: (phase_exp % 4) as u8,
        })
    }

    /// Hermitian operator `Π_q σ_q` from a letter per qubit.
    pub fn from_letters(letters: &[PauliLetter]) -> Self {
        let n = letters.len();
        let mut op = Self::identity(n);
        for (q, &l) in letters.iter().enumerate() {
            let (x, z) = l.bits();
            op.x.set(q, x);
            op.z.set(q, z);
        }
        op.phase = (op.y_count() % 4) as u8;
        op
    }

    /// Hermitian operator from a symplectic vector `x ∥ z` of length `2n`.
    pub fn from_symplectic(v: &BitVec) -> Self {
        let n = v.len() / 2;
        let x = v.slice(0, n);
        let z = v.slice(n, n);
        let phase = (x.and_count(&z) % 4) as u8;
        Self { x, z, phase }
    }

    pub fn single(n: usize, qubit: usize, letter: PauliLetter) -> Self {
        let mut letters = vec![PauliLetter::I; n];
        letters[qubit] = letter;
        Self::from_letters(&letters)
    }

    /// Product over the listed qubits of one letter, with repeated qubits
    /// multiplied out (so each repeated pair cancels).
    pub fn uniform(n: usize, qubits: &[usize], letter: PauliLetter) -> Self {
        qubits.iter().fold(Self::identity(n), |acc, &q| {
            acc.mul(&Self::single(n, q, letter))
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.x.len()
    }

    pub fn x_bits(&self) -> &BitVec {
        &self.x
    }

    pub fn z_bits(&self) -> &BitVec {
        &self.z
    }

    pub fn phase_exp(&self) -> u8 {
        self.phase
    }

    fn y_count(&self) -> usize {
        self.x.and_count(&self.z)
    }

    pub fn letter(&self, q: usize) -> PauliLetter {
        PauliLetter::from_bits(self.x.get(q), self.z.get(q))
    }

    pub fn letters(&self) -> Vec<PauliLetter> {
        (0..self.num_qubits()).map(|q| self.letter(q)).collect()
    }

    pub fn weight(&self) -> usize {
        self.x.count_ones() + self.z.count_ones() - self.y_count()
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.num_qubits())
            .filter(|&q| self.x.get(q) || self.z.get(q))
            .collect()
    }

    /// No Pauli factors, any phase.
    pub fn is_scalar(&self) -> bool {
        self.x.is_zero() && self.z.is_zero()
    }

    pub fn is_identity(&self) -> bool {
        self.is_scalar() && self.phase == 0
    }

    pub fn is_hermitian(&self) -> bool {
        (self.phase as usize) % 2 == self.y_count() % 2
    }

    /// Overall sign relative to the Hermitian letter string: `+1`, `-1`, or
    /// `None` for an anti-Hermitian operator.
    pub fn sign(&self) -> Option<i8> {
        match (self.phase as usize + 4 - self.y_count() % 4) % 4 {
            0 => Some(1),
            2 => Some(-1),
            _ => None,
        }
    }

    pub fn symplectic(&self) -> BitVec {
        self.x.concat(&self.z)
    }

    fn check_len(&self, other: &Self) -> Result<()> {
        if self.num_qubits() != other.num_qubits() {
            return Err(Error::LengthMismatch {
                left: self.num_qubits(),
                right: other.num_qubits(),
            });
        }
        Ok(())
    }

    /// Exact product `self · other`.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_len(other)?;
        Ok(self.mul(other))
    }

    // Z^{z1} X^{x2} = (-1)^{z1·x2} X^{x2} Z^{z1}
    fn mul(&self, other: &Self) -> Self {
        let swaps = self.z.and_count(&other.x);
        let phase = (self.phase as usize + other.phase as usize + 2 * swaps) % 4;
        Self {
            x: self.x.xor(&other.x),
            z: self.z.xor(&other.z),
            phase: phase as u8,
        }
    }

    pub fn mul_assign(&mut self, other: &Self) {
        assert_eq!(self.num_qubits(), other.num_qubits());
        *self = self.mul(other);
    }

    pub fn commutes(&self, other: &Self) -> Result<bool> {
        self.check_len(other)?;
        Ok(!self.anticommutes_unchecked(other))
    }

    /// Symplectic form `x·z' + z·x'` (mod 2).
    #[inline]
    pub fn anticommutes_unchecked(&self, other: &Self) -> bool {
        (self.x.and_count(&other.z) + self.z.and_count(&other.x)) % 2 == 1
    }

    pub fn letter_string(&self) -> String {
        self.letters()
            .into_iter()
            .map(PauliLetter::as_char)
            .collect()
    }
}

impl fmt::Debug for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "i^{}·{}", self.phase, self.letter_string())
    }
}

impl fmt::Display for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = match self.sign() {
            Some(1) => "+",
            Some(_) => "-",
            None if (self.phase as usize + 4 - self.y_count() % 4) % 4 == 1 => "+i",
            None => "-i",
        };
        write!(f, "{prefix}{}", self.letter_string())
    }
}

/// Symplectic inner product of two `x ∥ z` vectors.
pub fn symplectic_product(a: &BitVec, b: &BitVec) -> bool {
    assert_eq!(a.len(), b.len());
    let n = a.len() / 2;
    let (ax, az) = (a.slice(0, n), a.slice(n, n));
    let (bx, bz) = (b.slice(0, n), b.slice(n, n));
    (ax.and_count(&bz) + az.and_count(&bx)) % 2 == 1
}

#[cfg(test)]
mod tests {
    use super::PauliLetter::*;
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> PauliOperator {
        PauliOperator::from_letters(
            &s.chars()
                .map(|c| PauliLetter::from_char(c).unwrap())
                .collect::<Vec<_>>(),
        )
    }

    #[test]
    fn normal_ordered_xz() {
        let xz = p("X").multiply(&p("Z")).unwrap();
        assert_eq!(xz.letter(0), Y);
        assert_eq!(xz.phase_exp(), 0);
    }

    #[test]
    fn zx_picks_up_minus_sign() {
        let zx = p("Z").multiply(&p("X")).unwrap();
        assert!(zx.x_bits().get(0) && zx.z_bits().get(0));
        assert_eq!(zx.phase_exp(), 2);
    }

    #[test]
    fn xyz_is_i() {
        let r = p("X").multiply(&p("Y")).unwrap().multiply(&p("Z")).unwrap();
        assert!(r.is_scalar());
        assert_eq!(r.phase_exp(), 1);
    }

    #[test]
    fn y_squares_to_identity() {
        let y = p("Y");
        assert!(y.multiply(&y).unwrap().is_identity());
        assert_eq!(y.phase_exp(), 1);
    }

    #[test]
    fn commutation_examples() {
        assert!(!p("X").commutes(&p("Z")).unwrap());
        assert!(p("XXXX").commutes(&p("XIXX")).unwrap());
        assert!(p("XXII").commutes(&p("YYII")).unwrap());
        assert!(!p("XXIIII").commutes(&p("IZZIII")).unwrap());
    }

    #[test]
    fn length_mismatch_is_an_error() {
        assert!(matches!(
            p("X").multiply(&p("XX")),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(p("X").commutes(&p("XX")).is_err());
    }

    #[test]
    fn uniform_cancels_repeats() {
        let op = PauliOperator::uniform(3, &[0, 1, 1], Y);
        assert_eq!(op.letter_string(), "YII");
        assert_eq!(op.sign(), Some(1));
    }

    #[test]
    fn four_y_carry_trivial_phase() {
        let op = PauliOperator::uniform(4, &[0, 1, 2, 3], Y);
        assert_eq!(op.phase_exp(), 0);
        assert_eq!(op.weight(), 4);
    }

    // Single-qubit table oracle: products of the eight elements {±1,±i}·{I,X,Y,Z}
    // with hand-written Pauli rules, independent of the bit representation.
    fn table_mul(a: (u8, PauliLetter), b: (u8, PauliLetter)) -> (u8, PauliLetter) {
        let (pa, la) = a;
        let (pb, lb) = b;
        let (extra, l) = match (la, lb) {
            (I, l) | (l, I) => (0, l),
            (X, X) | (Y, Y) | (Z, Z) => (0, I),
            (X, Y) => (1, Z),
            (Y, Z) => (1, X),
            (Z, X) => (1, Y),
            (Y, X) => (3, Z),
            (Z, Y) => (3, X),
            (X, Z) => (3, Y),
        };
        ((pa + pb + extra) % 4, l)
    }

    fn letter() -> impl Strategy<Value = PauliLetter> {
        prop_oneof![Just(I), Just(X), Just(Y), Just(Z)]
    }

    fn operator(n: usize) -> impl Strategy<Value = (u8, Vec<PauliLetter>)> {
        (0u8..4, proptest::collection::vec(letter(), n))
    }

    fn build((phase, letters): &(u8, Vec<PauliLetter>)) -> PauliOperator {
        let h = PauliOperator::from_letters(letters);
        let s = PauliOperator::from_parts(
            BitVec::zeros(letters.len()),
            BitVec::zeros(letters.len()),
            *phase as u32,
        )
        .unwrap();
        s.multiply(&h).unwrap()
    }

    proptest! {
        #[test]
        fn product_matches_tensored_table(a in operator(5), b in operator(5)) {
            let prod = build(&a).multiply(&build(&b)).unwrap();
            let mut phase = (a.0 + b.0) % 4;
            let mut letters = Vec::new();
            for q in 0..5 {
                let (ph, l) = table_mul((0, a.1[q]), (0, b.1[q]));
                phase = (phase + ph) % 4;
                letters.push(l);
            }
            let expected = build(&(phase, letters));
            prop_assert_eq!(prod, expected);
        }

        #[test]
        fn multiply_is_associative(a in operator(6), b in operator(6), c in operator(6)) {
            let (a, b, c) = (build(&a), build(&b), build(&c));
            let left = a.multiply(&b).unwrap().multiply(&c).unwrap();
            let right = a.multiply(&b.multiply(&c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }

        #[test]
        fn commutes_agrees_with_product_phases(a in operator(7), b in operator(7)) {
            let (a, b) = (build(&a), build(&b));
            let ab = a.multiply(&b).unwrap();
            let ba = b.multiply(&a).unwrap();
            prop_assert_eq!(a.commutes(&b).unwrap(), ab == ba);
        }
    }
}
