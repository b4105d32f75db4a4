use super::{CellComplex, FaceShape};
use crate::pauli::PauliLetter;

#[derive(Clone, Debug, PartialEq)]
pub struct DualBond {
    pub sites: [usize; 2],
    pub face: usize,
    pub kind: PauliLetter,
    pub shape: FaceShape,
}

/// Ising graph on cell centres: one site per cell, one bond per primal face.
#[derive(Clone, Debug)]
pub struct DualIsingGraph {
    num_sites: usize,
    bonds: Vec<DualBond>,
    /// `neighbors[s]` lists the far end of every bond slot at `s`; a
    /// self-loop appears twice.
    neighbors: Vec<Vec<usize>>,
}

impl DualIsingGraph {
    pub fn from_complex(c: &CellComplex) -> Self {
        let bonds: Vec<DualBond> = c
            .faces()
            .iter()
            .enumerate()
            .map(|(f, face)| DualBond {
                sites: c.face_cells(f),
                face: f,
                kind: face.kind,
                shape: face.shape,
            })
            .collect();
        Self::from_bonds(c.num_cells(), bonds)
    }

    pub fn from_bonds(num_sites: usize, bonds: Vec<DualBond>) -> Self {
        let mut neighbors = vec![Vec::new(); num_sites];
        for b in &bonds {
            let [a, c] = b.sites;
            neighbors[a].push(c);
            neighbors[c].push(a);
        }
        Self {
            num_sites,
            bonds,
            neighbors,
        }
    }

    /// A graph with unit bonds between the listed site pairs.
    pub fn from_edges(num_sites: usize, edges: &[[usize; 2]]) -> Self {
        let bonds = edges
            .iter()
            .enumerate()
            .map(|(i, &sites)| DualBond {
                sites,
                face: i,
                kind: PauliLetter::I,
                shape: FaceShape::Square,
            })
            .collect();
        Self::from_bonds(num_sites, bonds)
    }

    pub fn num_sites(&self) -> usize {
        self.num_sites
    }

    pub fn num_bonds(&self) -> usize {
        self.bonds.len()
    }

    pub fn bonds(&self) -> &[DualBond] {
        &self.bonds
    }

    pub fn degree(&self, s: usize) -> usize {
        self.neighbors[s].len()
    }

    pub fn neighbors(&self, s: usize) -> &[usize] {
        &self.neighbors[s]
    }

    /// `Σ_bonds s_a s_b` for a ±1 spin configuration.
    pub fn bond_sum(&self, spins: &[i8]) -> i64 {
        self.bonds
            .iter()
            .map(|b| (spins[b.sites[0]] * spins[b.sites[1]]) as i64)
            .sum()
    }
}

/// Dual graph of the complex.
pub fn build_dual_graph(c: &CellComplex) -> DualIsingGraph {
    DualIsingGraph::from_complex(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{build_lattice, LatticeSpec};

    #[test]
    fn l2_dual_is_14_regular() {
        let c = build_lattice(LatticeSpec::new(2).unwrap());
        let g = build_dual_graph(&c);
        assert_eq!(g.num_sites(), 16);
        assert_eq!(g.num_bonds(), 112);
        assert_eq!(g.num_bonds(), c.num_faces());
        for s in 0..g.num_sites() {
            assert_eq!(g.degree(s), 14);
            let hex = g
                .bonds()
                .iter()
                .filter(|b| b.shape == FaceShape::Hexagon && b.sites.contains(&s))
                .count();
            let sq = g
                .bonds()
                .iter()
                .filter(|b| b.shape == FaceShape::Square && b.sites.contains(&s))
                .count();
            assert_eq!((hex, sq), (8, 6));
        }
    }

    #[test]
    fn hexagon_bonds_join_opposite_sublattices() {
        let c = build_lattice(LatticeSpec::new(3).unwrap());
        let g = build_dual_graph(&c);
        for b in g.bonds() {
            let [a, d] = b.sites;
            let same = c.cells()[a].center[0] % 4 == c.cells()[d].center[0] % 4;
            assert_eq!(same, b.shape == FaceShape::Square);
        }
    }

    #[test]
    fn multigraph_l1_has_self_loops() {
        let c = build_lattice(LatticeSpec::multigraph(1).unwrap());
        let g = build_dual_graph(&c);
        assert_eq!(g.num_sites(), 2);
        assert_eq!(g.num_bonds(), 14);
        for s in 0..2 {
            assert_eq!(g.degree(s), 14);
        }
    }
}
