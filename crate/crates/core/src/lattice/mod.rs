//! Periodic bitruncated cubic honeycomb.
//!
//! Cells are truncated octahedra centred on the BCC points `(4i,4j,4k)` and
//! `(4i+2,4j+2,4k+2)` modulo `4L`. The vertices of a cell are its centre plus
//! every permutation of `(0,±1,±2)`. Square faces sit at centre `±2ê` and
//! always carry `Y`; hexagonal faces sit at centre `(±1,±1,±1)` and carry `X`
//! when the coordinate sum of their (reduced) centre is `3 mod 4`, `Z` when it
//! is `1 mod 4`. Because the type depends only on the absolute centre, both
//! cells sharing a face agree on it.

mod dual;
mod export;
mod validate;

use std::collections::{BTreeMap, BTreeSet, HashMap};

pub use dual::{build_dual_graph, DualBond, DualIsingGraph};
pub use export::{export_csv, export_json};
pub use validate::{CheckResult, ValidationReport};

use crate::error::{Error, Result};
use crate::pauli::PauliLetter;

pub type Coord = [i64; 3];

/// Lattice size and energy scale.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LatticeSpec {
    size: usize,
    coupling: f64,
    multigraph: bool,
}

impl LatticeSpec {
    /// `L ≥ 2` periods per axis, coupling `J = 1`.
    pub fn new(size: i64) -> Result<Self> {
        Self::build(size, false)
    }

    /// Like [`LatticeSpec::new`] but also admits `L = 1`, where faces of the
    /// same cell are identified with each other under periodicity.
    pub fn multigraph(size: i64) -> Result<Self> {
        Self::build(size, true)
    }

    fn build(size: i64, multigraph: bool) -> Result<Self> {
        if size <= 0 {
            return Err(Error::InvalidSize {
                size,
                reason: "the number of periods must be positive",
            });
        }
        if size == 1 && !multigraph {
            return Err(Error::InvalidSize {
                size,
                reason: "L = 1 needs multigraph mode",
            });
        }
        Ok(Self {
            size: size as usize,
            coupling: 1.0,
            multigraph,
        })
    }

    pub fn with_coupling(mut self, coupling: f64) -> Self {
        self.coupling = coupling;
        self
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    pub fn is_multigraph(&self) -> bool {
        self.multigraph
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FaceShape {
    Square,
    Hexagon,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Face {
    pub center: Coord,
    /// Vertex ids in cyclic order around the face.
    pub vertices: Vec<usize>,
    /// Edge ids; edge `i` joins `vertices[i]` and `vertices[i+1]`.
    pub edges: Vec<usize>,
    pub kind: PauliLetter,
    pub shape: FaceShape,
    /// Outward normal as seen from the lower-id adjacent cell (`±ê` for squares).
    pub normal: Coord,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Edge {
    pub vertices: [usize; 2],
    /// Twice the midpoint, reduced modulo `8L`.
    pub doubled_midpoint: Coord,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Cell {
    pub center: Coord,
    /// 14 face ids (repeated in multigraph mode).
    pub faces: Vec<usize>,
    /// 24 vertex ids (repeated in multigraph mode).
    pub vertices: Vec<usize>,
}

/// Immutable periodic 3-complex with typed faces.
#[derive(Clone, Debug)]
pub struct CellComplex {
    spec: LatticeSpec,
    vertices: Vec<Coord>,
    edges: Vec<Edge>,
    faces: Vec<Face>,
    cells: Vec<Cell>,
    vertex_edges: Vec<Vec<usize>>,
    vertex_faces: Vec<Vec<usize>>,
    edge_faces: Vec<Vec<usize>>,
    face_cells: Vec<[usize; 2]>,
    vertex_index: HashMap<Coord, usize>,
}

const SIGNS: [i64; 2] = [1, -1];

/// Vertex offsets `(0,±1,±2)` permuted, relative to a cell centre.
fn cell_vertex_offsets() -> Vec<Coord> {
    let perms = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    let mut out = Vec::with_capacity(24);
    for p in perms {
        for s1 in SIGNS {
            for s2 in SIGNS {
                let mut v = [0i64; 3];
                // the zero slot takes no sign
                let mut signs = [s1, s2].into_iter();
                for (axis, &mag) in p.iter().enumerate() {
                    v[axis] = if mag == 0 {
                        0
                    } else {
                        mag * signs.next().unwrap()
                    };
                }
                out.push(v);
            }
        }
    }
    out
}

struct RawFace {
    center: Coord,
    cycle: Vec<Coord>,
    shape: FaceShape,
    normal: Coord,
}

/// The 14 faces of a truncated octahedron centred at the origin.
fn cell_face_templates() -> Vec<RawFace> {
    let mut faces = Vec::with_capacity(14);
    for axis in 0..3 {
        for s in SIGNS {
            let (a, b) = ((axis + 1) % 3, (axis + 2) % 3);
            let cycle = [(1, 0), (0, 1), (-1, 0), (0, -1)]
                .iter()
                .map(|&(da, db)| {
                    let mut v = [0i64; 3];
                    v[axis] = 2 * s;
                    v[a] = da;
                    v[b] = db;
                    v
                })
                .collect();
            let mut normal = [0; 3];
            normal[axis] = s;
            faces.push(RawFace {
                center: normal.map(|c| 2 * c),
                cycle,
                shape: FaceShape::Square,
                normal,
            });
        }
    }
    // Consecutive entries differ by swapping two magnitudes that differ by one.
    let magnitudes = [
        [0, 1, 2],
        [1, 0, 2],
        [2, 0, 1],
        [2, 1, 0],
        [1, 2, 0],
        [0, 2, 1],
    ];
    for sx in SIGNS {
        for sy in SIGNS {
            for sz in SIGNS {
                let s = [sx, sy, sz];
                let cycle = magnitudes
                    .iter()
                    .map(|m| [m[0] * s[0], m[1] * s[1], m[2] * s[2]])
                    .collect();
                faces.push(RawFace {
                    center: s,
                    cycle,
                    shape: FaceShape::Hexagon,
                    normal: s,
                });
            }
        }
    }
    faces
}

fn add(a: Coord, b: Coord) -> Coord {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

impl CellComplex {
    /// Builds the complex; ids are assigned in lexicographic order of the
    /// reduced coordinates (vertices, faces and cells) and doubled midpoints
    /// (edges).
    pub fn build(spec: LatticeSpec) -> Self {
        let l = spec.size as i64;
        let m = 4 * l;
        let wrap = |c: Coord| c.map(|x| x.rem_euclid(m));
        let wrap2 = |c: Coord| c.map(|x| x.rem_euclid(2 * m));

        let mut cell_centers = BTreeSet::new();
        for i in 0..l {
            for j in 0..l {
                for k in 0..l {
                    cell_centers.insert([4 * i, 4 * j, 4 * k]);
                    cell_centers.insert([4 * i + 2, 4 * j + 2, 4 * k + 2]);
                }
            }
        }
        let cell_centers: Vec<Coord> = cell_centers.into_iter().collect();

        let offsets = cell_vertex_offsets();
        let templates = cell_face_templates();

        let mut vertex_set = BTreeSet::new();
        let mut face_map: BTreeMap<Coord, (Vec<Coord>, FaceShape, Coord)> = BTreeMap::new();
        for &c in &cell_centers {
            for &o in &offsets {
                vertex_set.insert(wrap(add(c, o)));
            }
            for t in &templates {
                let center = wrap(add(c, t.center));
                face_map.entry(center).or_insert_with(|| {
                    (
                        t.cycle.iter().map(|&v| add(c, v)).collect(),
                        t.shape,
                        t.normal,
                    )
                });
            }
        }

        let vertices: Vec<Coord> = vertex_set.into_iter().collect();
        let vertex_index: HashMap<Coord, usize> =
            vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let face_index: HashMap<Coord, usize> =
            face_map.keys().enumerate().map(|(i, &c)| (c, i)).collect();

        // edges keyed by doubled midpoint
        let mut edge_map: BTreeMap<Coord, [usize; 2]> = BTreeMap::new();
        for (cycle, _, _) in face_map.values() {
            for i in 0..cycle.len() {
                let a = cycle[i];
                let b = cycle[(i + 1) % cycle.len()];
                let key = wrap2(add(a, b));
                let (ia, ib) = (vertex_index[&wrap(a)], vertex_index[&wrap(b)]);
                edge_map.entry(key).or_insert([ia.min(ib), ia.max(ib)]);
            }
        }
        let edge_index: HashMap<Coord, usize> =
            edge_map.keys().enumerate().map(|(i, &k)| (k, i)).collect();
        let edges: Vec<Edge> = edge_map
            .iter()
            .map(|(&k, &v)| Edge {
                vertices: v,
                doubled_midpoint: k,
            })
            .collect();

        let faces: Vec<Face> = face_map
            .iter()
            .map(|(&center, (cycle, shape, normal))| {
                let kind = match shape {
                    FaceShape::Square => PauliLetter::Y,
                    FaceShape::Hexagon => {
                        if center.iter().sum::<i64>().rem_euclid(4) == 3 {
                            PauliLetter::X
                        } else {
                            PauliLetter::Z
                        }
                    }
                };
                let n = cycle.len();
                Face {
                    center,
                    vertices: cycle.iter().map(|&v| vertex_index[&wrap(v)]).collect(),
                    edges: (0..n)
                        .map(|i| edge_index[&wrap2(add(cycle[i], cycle[(i + 1) % n]))])
                        .collect(),
                    kind,
                    shape: *shape,
                    normal: *normal,
                }
            })
            .collect();

        let cells: Vec<Cell> = cell_centers
            .iter()
            .map(|&c| Cell {
                center: c,
                faces: templates
                    .iter()
                    .map(|t| face_index[&wrap(add(c, t.center))])
                    .collect(),
                vertices: offsets
                    .iter()
                    .map(|&o| vertex_index[&wrap(add(c, o))])
                    .collect(),
            })
            .collect();

        let mut vertex_edges = vec![Vec::new(); vertices.len()];
        for (e, edge) in edges.iter().enumerate() {
            for &v in &edge.vertices {
                if !vertex_edges[v].contains(&e) {
                    vertex_edges[v].push(e);
                }
            }
        }
        let mut vertex_faces = vec![Vec::new(); vertices.len()];
        let mut edge_faces = vec![Vec::new(); edges.len()];
        for (f, face) in faces.iter().enumerate() {
            for &v in &face.vertices {
                if !vertex_faces[v].contains(&f) {
                    vertex_faces[v].push(f);
                }
            }
            for &e in &face.edges {
                if !edge_faces[e].contains(&f) {
                    edge_faces[e].push(f);
                }
            }
        }
        let mut slots: Vec<Vec<usize>> = vec![Vec::new(); faces.len()];
        for (c, cell) in cells.iter().enumerate() {
            for &f in &cell.faces {
                slots[f].push(c);
            }
        }
        let face_cells = slots
            .into_iter()
            .map(|s| {
                debug_assert_eq!(s.len(), 2, "every face borders two cell slots");
                [s[0], s[1]]
            })
            .collect();

        Self {
            spec,
            vertices,
            edges,
            faces,
            cells,
            vertex_edges,
            vertex_faces,
            edge_faces,
            face_cells,
            vertex_index,
        }
    }

    pub fn spec(&self) -> &LatticeSpec {
        &self.spec
    }

    pub fn size(&self) -> usize {
        self.spec.size
    }

    /// Coordinate period `4L`.
    pub fn modulus(&self) -> i64 {
        4 * self.spec.size as i64
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn num_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.num_vertices() as i64 - self.num_edges() as i64 + self.num_faces() as i64
            - self.num_cells() as i64
    }

    pub fn vertices(&self) -> &[Coord] {
        &self.vertices
    }

    pub fn vertex(&self, v: usize) -> Coord {
        self.vertices[v]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn face(&self, f: usize) -> Result<&Face> {
        self.faces.get(f).ok_or(Error::UnknownFace(f))
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn vertex_edges(&self, v: usize) -> &[usize] {
        &self.vertex_edges[v]
    }

    pub fn vertex_faces(&self, v: usize) -> &[usize] {
        &self.vertex_faces[v]
    }

    pub fn edge_faces(&self, e: usize) -> &[usize] {
        &self.edge_faces[e]
    }

    /// The two cell slots bordering face `f` (equal ids for a self-adjacent
    /// face in multigraph mode).
    pub fn face_cells(&self, f: usize) -> [usize; 2] {
        self.face_cells[f]
    }

    pub fn vertex_id(&self, c: Coord) -> Option<usize> {
        let m = self.modulus();
        self.vertex_index.get(&c.map(|x| x.rem_euclid(m))).copied()
    }

    /// Neighbouring vertex ids along edges.
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.vertex_edges[v].iter().map(move |&e| {
            let [a, b] = self.edges[e].vertices;
            if a == v {
                b
            } else {
                a
            }
        })
    }

    pub fn faces_of_kind(&self, kind: PauliLetter) -> impl Iterator<Item = usize> + '_ {
        self.faces
            .iter()
            .enumerate()
            .filter(move |(_, f)| f.kind == kind)
            .map(|(i, _)| i)
    }

    /// `(n_x, n_y, n_z)`.
    pub fn kind_counts(&self) -> (usize, usize, usize) {
        let count = |k| self.faces.iter().filter(|f| f.kind == k).count();
        (
            count(PauliLetter::X),
            count(PauliLetter::Y),
            count(PauliLetter::Z),
        )
    }

    /// Overrides the type of one face. Used to exercise the validators on a
    /// deliberately broken assignment.
    pub fn retype_face(&mut self, f: usize, kind: PauliLetter) -> Result<()> {
        let face = self.faces.get_mut(f).ok_or(Error::UnknownFace(f))?;
        face.kind = kind;
        Ok(())
    }

    /// Signed displacement `b - a` taken in the periodic box, each component
    /// in `(-2L, 2L]`.
    pub fn displacement(&self, a: Coord, b: Coord) -> Coord {
        let m = self.modulus();
        let mut d = [0; 3];
        for i in 0..3 {
            let mut x = (b[i] - a[i]).rem_euclid(m);
            if x > m / 2 {
                x -= m;
            }
            d[i] = x;
        }
        d
    }

    pub fn validate(&self) -> ValidationReport {
        validate::validate_complex(self)
    }

    pub fn dual_graph(&self) -> DualIsingGraph {
        DualIsingGraph::from_complex(self)
    }
}

/// Builds the complex for `spec`.
pub fn build_lattice(spec: LatticeSpec) -> CellComplex {
    CellComplex::build(spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complex(l: i64) -> CellComplex {
        build_lattice(LatticeSpec::new(l).unwrap())
    }

    #[test]
    fn rejects_bad_sizes() {
        assert!(matches!(
            LatticeSpec::new(0),
            Err(Error::InvalidSize { .. })
        ));
        assert!(matches!(
            LatticeSpec::new(-3),
            Err(Error::InvalidSize { .. })
        ));
        assert!(matches!(
            LatticeSpec::new(1),
            Err(Error::InvalidSize { .. })
        ));
        assert!(LatticeSpec::multigraph(1).is_ok());
        assert!(LatticeSpec::multigraph(0).is_err());
    }

    #[test]
    fn counts_at_l2() {
        let c = complex(2);
        assert_eq!(
            (
                c.num_vertices(),
                c.num_edges(),
                c.num_faces(),
                c.num_cells()
            ),
            (96, 192, 112, 16)
        );
        assert_eq!(c.kind_counts(), (32, 48, 32));
    }

    #[test]
    fn counts_scale_with_volume() {
        for l in 2..=4 {
            let c = complex(l);
            let l3 = (l * l * l) as usize;
            assert_eq!(c.num_vertices(), 12 * l3);
            assert_eq!(c.num_edges(), 24 * l3);
            assert_eq!(c.num_faces(), 14 * l3);
            assert_eq!(c.num_cells(), 2 * l3);
            assert_eq!(c.euler_characteristic(), 0);
        }
    }

    #[test]
    fn multigraph_l1_counts() {
        let c = build_lattice(LatticeSpec::multigraph(1).unwrap());
        assert_eq!(
            (
                c.num_vertices(),
                c.num_edges(),
                c.num_faces(),
                c.num_cells()
            ),
            (12, 24, 14, 2)
        );
        assert_eq!(c.euler_characteristic(), 0);
    }

    #[test]
    fn construction_is_deterministic() {
        let a = complex(2);
        let b = complex(2);
        assert_eq!(a.vertices(), b.vertices());
        assert_eq!(a.faces(), b.faces());
        assert_eq!(a.cells(), b.cells());
        let mut sorted = a.vertices().to_vec();
        sorted.sort();
        assert_eq!(sorted, a.vertices());
    }

    #[test]
    fn edges_have_length_sqrt2() {
        let c = complex(2);
        for e in c.edges() {
            let d = c.displacement(c.vertex(e.vertices[0]), c.vertex(e.vertices[1]));
            assert_eq!(d.iter().map(|x| x * x).sum::<i64>(), 2);
        }
    }

    #[test]
    fn translation_by_one_period_preserves_types() {
        let c = complex(3);
        let m = c.modulus();
        let by_center: HashMap<Coord, PauliLetter> =
            c.faces().iter().map(|f| (f.center, f.kind)).collect();
        for axis in 0..3 {
            for f in c.faces() {
                let mut t = f.center;
                t[axis] = (t[axis] + 4).rem_euclid(m);
                assert_eq!(by_center.get(&t), Some(&f.kind));
            }
            for &v in c.vertices() {
                let mut t = v;
                t[axis] += 4;
                assert!(c.vertex_id(t).is_some());
            }
        }
    }

    #[test]
    fn face_type_agrees_from_both_cells() {
        let c = complex(2);
        let m = c.modulus();
        let templates = cell_face_templates();
        for cell in c.cells() {
            for (t, &f) in templates.iter().zip(&cell.faces) {
                let center = add(cell.center, t.center).map(|x| x.rem_euclid(m));
                let expected = match t.shape {
                    FaceShape::Square => PauliLetter::Y,
                    FaceShape::Hexagon if center.iter().sum::<i64>() % 4 == 3 => PauliLetter::X,
                    FaceShape::Hexagon => PauliLetter::Z,
                };
                assert_eq!(c.faces()[f].kind, expected);
            }
        }
    }
}
