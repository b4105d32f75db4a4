use std::fmt::Write as _;

use serde::Serialize;

use super::{CellComplex, Coord};

#[derive(Serialize)]
struct FaceRecord<'a> {
    id: usize,
    #[serde(rename = "type")]
    kind: char,
    center: Coord,
    vertices: &'a [usize],
}

#[derive(Serialize)]
struct CellRecord<'a> {
    id: usize,
    center: Coord,
    faces: &'a [usize],
}

#[derive(Serialize)]
struct ComplexRecord<'a> {
    #[serde(rename = "L")]
    size: usize,
    counts: [usize; 4],
    vertices: &'a [Coord],
    faces: Vec<FaceRecord<'a>>,
    cells: Vec<CellRecord<'a>>,
}

/// Pretty-printed JSON of vertex coordinates, face vertex lists and types,
/// and cell face lists. Byte-identical across runs.
pub fn export_json(c: &CellComplex) -> String {
    let record = ComplexRecord {
        size: c.size(),
        counts: [
            c.num_vertices(),
            c.num_edges(),
            c.num_faces(),
            c.num_cells(),
        ],
        vertices: c.vertices(),
        faces: c
            .faces()
            .iter()
            .enumerate()
            .map(|(id, f)| FaceRecord {
                id,
                kind: f.kind.as_char(),
                center: f.center,
                vertices: &f.vertices,
            })
            .collect(),
        cells: c
            .cells()
            .iter()
            .enumerate()
            .map(|(id, cell)| CellRecord {
                id,
                center: cell.center,
                faces: &cell.faces,
            })
            .collect(),
    };
    let mut s = serde_json::to_string_pretty(&record).expect("complex serializes");
    s.push('\n');
    s
}

/// One record per line: `record,id,type,values` with space-separated values.
pub fn export_csv(c: &CellComplex) -> String {
    let mut out = String::from("record,id,type,values\n");
    let join = |xs: &[usize]| {
        xs.iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    };
    for (i, v) in c.vertices().iter().enumerate() {
        writeln!(out, "vertex,{i},,{} {} {}", v[0], v[1], v[2]).unwrap();
    }
    for (i, f) in c.faces().iter().enumerate() {
        writeln!(out, "face,{i},{},{}", f.kind.as_char(), join(&f.vertices)).unwrap();
    }
    for (i, cell) in c.cells().iter().enumerate() {
        writeln!(out, "cell,{i},,{}", join(&cell.faces)).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{build_lattice, LatticeSpec};

    #[test]
    fn exports_are_reproducible() {
        let a = build_lattice(LatticeSpec::new(2).unwrap());
        let b = build_lattice(LatticeSpec::new(2).unwrap());
        assert_eq!(export_json(&a), export_json(&b));
        assert_eq!(export_csv(&a), export_csv(&b));
    }

    #[test]
    fn csv_has_one_line_per_object() {
        let c = build_lattice(LatticeSpec::new(2).unwrap());
        let lines = export_csv(&c).lines().count();
        assert_eq!(lines, 1 + 96 + 112 + 16);
    }

    #[test]
    fn json_parses_back() {
        let c = build_lattice(LatticeSpec::new(2).unwrap());
        let v: serde_json::Value = serde_json::from_str(&export_json(&c)).unwrap();
        assert_eq!(v["L"], 2);
        assert_eq!(v["faces"].as_array().unwrap().len(), 112);
        assert_eq!(v["faces"][0]["type"].as_str().unwrap().len(), 1);
    }
}
