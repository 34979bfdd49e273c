//! Structured 2D meshes of parallelograms or triangles with face connectivity.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

pub type Point = [f64; 2];

/// Default bound on `max h_K / min h_K` checked by [`validate`].
pub const QUASI_UNIFORMITY_BOUND: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElementKind {
    Quad,
    Triangle,
}

impl ElementKind {
    pub fn vertex_count(self) -> usize {
        match self {
            ElementKind::Quad => 4,
            ElementKind::Triangle => 3,
        }
    }
}

/// An edge of the mesh.
///
/// Interior faces are shared by two elements; the element with the lower
/// index is the plus side and `normal` is its outward unit normal. Boundary
/// faces have no minus element and an outward normal.
#[derive(Debug, Clone, PartialEq)]
pub struct Face {
    pub vertices: [usize; 2],
    pub normal: Point,
    pub plus: usize,
    pub minus: Option<usize>,
    pub length: f64,
}

impl Face {
    pub fn is_boundary(&self) -> bool {
        self.minus.is_none()
    }
}

/// Grid layout of a mesh produced by [`cartesian_mesh`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CartesianLayout {
    pub nx: usize,
    pub ny: usize,
    pub bounds: [f64; 4],
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    pub kind: ElementKind,
    pub vertices: Vec<Point>,
    /// Vertex indices per element in counter-clockwise order.
    pub elements: Vec<Vec<usize>>,
    pub faces: Vec<Face>,
    /// `element_faces[e][k]` is the face on the edge from local vertex `k` to `k+1`.
    pub element_faces: Vec<Vec<usize>>,
    /// Element diameters `h_K`.
    pub h_elem: Vec<f64>,
    pub cartesian: Option<CartesianLayout>,
}

/// Which diagonal splits each unit square of [`lshape_mesh`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LShapeDiagonal {
    /// Every diagonal ends at the re-entrant corner (0, 0).
    #[default]
    TowardCorner,
    /// The opposite diagonal in every square.
    AwayFromCorner,
}

impl Mesh {
    /// Builds faces, diameters and connectivity from raw vertices and elements.
    pub fn from_elements(kind: ElementKind, vertices: Vec<Point>, elements: Vec<Vec<usize>>) -> Result<Mesh> {
        let nv = kind.vertex_count();
        let mut faces: Vec<Face> = Vec::new();
        let mut element_faces = vec![vec![usize::MAX; nv]; elements.len()];
        let mut edge_map: HashMap<(usize, usize), usize> = HashMap::new();
        for (e, verts) in elements.iter().enumerate() {
            if verts.len() != nv {
                return Err(Error::UnsupportedMesh(format!(
                    "element {e} has {} vertices, expected {nv}",
                    verts.len()
                )));
            }
            if signed_area(&vertices, verts) <= 0.0 {
                return Err(Error::UnsupportedMesh(format!(
                    "element {e} is degenerate or clockwise"
                )));
            }
            for k in 0..nv {
                let a = verts[k];
                let b = verts[(k + 1) % nv];
                let key = (a.min(b), a.max(b));
                match edge_map.get(&key) {
                    Some(&f) => {
                        if faces[f].minus.is_some() {
                            return Err(Error::UnsupportedMesh(format!(
                                "edge {a}-{b} shared by more than two elements"
                            )));
                        }
                        faces[f].minus = Some(e);
                        element_faces[e][k] = f;
                    }
                    None => {
                        let (pa, pb) = (vertices[a], vertices[b]);
                        let d = [pb[0] - pa[0], pb[1] - pa[1]];
                        let length = d[0].hypot(d[1]);
                        // CCW order: outward normal is the edge direction rotated clockwise.
                        let normal = [d[1] / length, -d[0] / length];
                        edge_map.insert(key, faces.len());
                        element_faces[e][k] = faces.len();
                        faces.push(Face {
                            vertices: [a, b],
                            normal,
                            plus: e,
                            minus: None,
                            length,
                        });
                    }
                }
            }
        }
        let h_elem = elements.iter().map(|verts| diameter(&vertices, verts)).collect();
        Ok(Mesh {
            kind,
            vertices,
            elements,
            faces,
            element_faces,
            h_elem,
            cartesian: None,
        })
    }

    pub fn num_elements(&self) -> usize {
        self.elements.len()
    }

    pub fn element_vertices(&self, e: usize) -> Vec<Point> {
        self.elements[e].iter().map(|&v| self.vertices[v]).collect()
    }

    pub fn element_area(&self, e: usize) -> f64 {
        signed_area(&self.vertices, &self.elements[e])
    }

    pub fn total_area(&self) -> f64 {
        (0..self.num_elements()).map(|e| self.element_area(e)).sum()
    }

    pub fn centroid(&self, e: usize) -> Point {
        let verts = &self.elements[e];
        let n = verts.len() as f64;
        let mut c = [0.0; 2];
        for &v in verts {
            c[0] += self.vertices[v][0] / n;
            c[1] += self.vertices[v][1] / n;
        }
        c
    }

    pub fn interior_faces(&self) -> impl Iterator<Item = (usize, &Face)> {
        self.faces.iter().enumerate().filter(|(_, f)| !f.is_boundary())
    }

    pub fn boundary_faces(&self) -> impl Iterator<Item = (usize, &Face)> {
        self.faces.iter().enumerate().filter(|(_, f)| f.is_boundary())
    }

    /// Elements sharing a face with `e`.
    pub fn neighbours(&self, e: usize) -> Vec<usize> {
        self.element_faces[e]
            .iter()
            .filter_map(|&f| {
                let face = &self.faces[f];
                match face.minus {
                    Some(m) if face.plus == e => Some(m),
                    Some(_) => Some(face.plus),
                    None => None,
                }
            })
            .collect()
    }

    pub fn max_h(&self) -> f64 {
        self.h_elem.iter().cloned().fold(0.0, f64::max)
    }

    /// Writes the mesh as plain text.
    ///
    /// Format: a header line `kind <quad|triangle>`, then one line
    /// `v <index> <x> <y>` per vertex, then one line `e <index> <v0> <v1> ...`
    /// per element with vertices in counter-clockwise order.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        let kind = match self.kind {
            ElementKind::Quad => "quad",
            ElementKind::Triangle => "triangle",
        };
        writeln!(s, "kind {kind}").unwrap();
        for (i, v) in self.vertices.iter().enumerate() {
            writeln!(s, "v {i} {:.17e} {:.17e}", v[0], v[1]).unwrap();
        }
        for (i, el) in self.elements.iter().enumerate() {
            let ids: Vec<String> = el.iter().map(|v| v.to_string()).collect();
            writeln!(s, "e {i} {}", ids.join(" ")).unwrap();
        }
        s
    }

    pub fn write_dump(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.dump()).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })
    }
}

fn signed_area(vertices: &[Point], verts: &[usize]) -> f64 {
    let n = verts.len();
    let mut a = 0.0;
    for k in 0..n {
        let p = vertices[verts[k]];
        let q = vertices[verts[(k + 1) % n]];
        a += p[0] * q[1] - q[0] * p[1];
    }
    0.5 * a
}

fn diameter(vertices: &[Point], verts: &[usize]) -> f64 {
    let mut h: f64 = 0.0;
    for (i, &a) in verts.iter().enumerate() {
        for &b in &verts[i + 1..] {
            let (p, q) = (vertices[a], vertices[b]);
            h = h.max((p[0] - q[0]).hypot(p[1] - q[1]));
        }
    }
    h
}

fn check_bounds(nx: usize, ny: usize, bounds: [f64; 4]) -> Result<()> {
    let [x0, x1, y0, y1] = bounds;
    if nx == 0 || ny == 0 {
        return Err(Error::precondition("cartesian mesh needs nx, ny >= 1"));
    }
    if !(x1 > x0 && y1 > y0) || bounds.iter().any(|b| !b.is_finite()) {
        return Err(Error::precondition(format!("degenerate bounds {bounds:?}")));
    }
    Ok(())
}

fn grid_vertices(nx: usize, ny: usize, bounds: [f64; 4]) -> Vec<Point> {
    let [x0, x1, y0, y1] = bounds;
    let mut v = Vec::with_capacity((nx + 1) * (ny + 1));
    for j in 0..=ny {
        let y = y0 + (y1 - y0) * j as f64 / ny as f64;
        for i in 0..=nx {
            let x = x0 + (x1 - x0) * i as f64 / nx as f64;
            v.push([x, y]);
        }
    }
    v
}

/// `nx × ny` axis-aligned rectangles on `bounds = [x0, x1, y0, y1]`,
/// numbered row by row from the bottom-left corner.
pub fn cartesian_mesh(nx: usize, ny: usize, bounds: [f64; 4]) -> Result<Mesh> {
    check_bounds(nx, ny, bounds)?;
    let vertices = grid_vertices(nx, ny, bounds);
    let id = |i: usize, j: usize| j * (nx + 1) + i;
    let mut elements = Vec::with_capacity(nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            elements.push(vec![id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)]);
        }
    }
    let mut mesh = Mesh::from_elements(ElementKind::Quad, vertices, elements)?;
    mesh.cartesian = Some(CartesianLayout { nx, ny, bounds });
    Ok(mesh)
}

/// Cartesian grid with every rectangle cut into two triangles along the
/// diagonal from its bottom-left to its top-right corner.
pub fn triangulated_square(nx: usize, ny: usize, bounds: [f64; 4]) -> Result<Mesh> {
    check_bounds(nx, ny, bounds)?;
    let vertices = grid_vertices(nx, ny, bounds);
    let id = |i: usize, j: usize| j * (nx + 1) + i;
    let mut elements = Vec::with_capacity(2 * nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            elements.push(vec![id(i, j), id(i + 1, j), id(i + 1, j + 1)]);
            elements.push(vec![id(i, j), id(i + 1, j + 1), id(i, j + 1)]);
        }
    }
    Mesh::from_elements(ElementKind::Triangle, vertices, elements)
}

/// Six-triangle mesh of the L-shaped domain `(-1,1)² \ [0,1)×(-1,0]`.
pub fn lshape_mesh() -> Mesh {
    lshape_mesh_with(LShapeDiagonal::TowardCorner)
}

pub fn lshape_mesh_with(diagonal: LShapeDiagonal) -> Mesh {
    let vertices = vec![
        [-1.0, -1.0], // 0
        [0.0, -1.0],  // 1
        [-1.0, 0.0],  // 2
        [0.0, 0.0],   // 3
        [1.0, 0.0],   // 4
        [-1.0, 1.0],  // 5
        [0.0, 1.0],   // 6
        [1.0, 1.0],   // 7
    ];
    // Squares as (bottom-left, bottom-right, top-right, top-left).
    let squares = [[0, 1, 3, 2], [2, 3, 6, 5], [3, 4, 7, 6]];
    let mut elements = Vec::with_capacity(6);
    for sq in squares {
        let corner = sq.iter().position(|&v| v == 3).expect("square touches the corner");
        let split_at = match diagonal {
            LShapeDiagonal::TowardCorner => corner,
            LShapeDiagonal::AwayFromCorner => (corner + 1) % 4,
        };
        let a = sq[split_at];
        let b = sq[(split_at + 1) % 4];
        let c = sq[(split_at + 2) % 4];
        let d = sq[(split_at + 3) % 4];
        elements.push(vec![a, b, c]);
        elements.push(vec![a, c, d]);
    }
    Mesh::from_elements(ElementKind::Triangle, vertices, elements).expect("valid L-shape mesh")
}

/// Splits every element into four similar children.
pub fn refine_uniform(mesh: &Mesh) -> Mesh {
    if let Some(layout) = mesh.cartesian {
        return cartesian_mesh(2 * layout.nx, 2 * layout.ny, layout.bounds).expect("refining a valid grid");
    }
    let mut vertices = mesh.vertices.clone();
    let mut midpoints: HashMap<(usize, usize), usize> = HashMap::new();
    let mut mid = |a: usize, b: usize, vertices: &mut Vec<Point>| -> usize {
        let key = (a.min(b), a.max(b));
        *midpoints.entry(key).or_insert_with(|| {
            let (p, q) = (vertices[a], vertices[b]);
            vertices.push([0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1])]);
            vertices.len() - 1
        })
    };
    let mut elements = Vec::with_capacity(4 * mesh.num_elements());
    for el in &mesh.elements {
        match mesh.kind {
            ElementKind::Triangle => {
                let (a, b, c) = (el[0], el[1], el[2]);
                let ab = mid(a, b, &mut vertices);
                let bc = mid(b, c, &mut vertices);
                let ca = mid(c, a, &mut vertices);
                elements.push(vec![a, ab, ca]);
                elements.push(vec![ab, b, bc]);
                elements.push(vec![ca, bc, c]);
                elements.push(vec![ab, bc, ca]);
            }
            ElementKind::Quad => {
                let m: Vec<usize> = (0..4).map(|k| mid(el[k], el[(k + 1) % 4], &mut vertices)).collect();
                let c = {
                    let pts: Vec<Point> = el.iter().map(|&v| vertices[v]).collect();
                    vertices.push([
                        pts.iter().map(|p| p[0]).sum::<f64>() / 4.0,
                        pts.iter().map(|p| p[1]).sum::<f64>() / 4.0,
                    ]);
                    vertices.len() - 1
                };
                elements.push(vec![el[0], m[0], c, m[3]]);
                elements.push(vec![m[0], el[1], m[1], c]);
                elements.push(vec![c, m[1], el[2], m[2]]);
                elements.push(vec![m[3], c, m[2], el[3]]);
            }
        }
    }
    Mesh::from_elements(mesh.kind, vertices, elements).expect("refining a valid mesh")
}

/// Outcome of [`validate`]; `violation` names the first failed invariant.
#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostics {
    pub violation: Option<String>,
}

impl Diagnostics {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

/// Checks connectivity, orientation, face geometry and quasi-uniformity.
pub fn validate(mesh: &Mesh) -> Diagnostics {
    let fail = |msg: String| Diagnostics { violation: Some(msg) };
    let nv = mesh.kind.vertex_count();
    let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
    for (f, face) in mesh.faces.iter().enumerate() {
        let [a, b] = face.vertices;
        if let Some(prev) = seen.insert((a.min(b), a.max(b)), f) {
            return fail(format!("connectivity: faces {prev} and {f} duplicate an edge"));
        }
        if (face.normal[0].hypot(face.normal[1]) - 1.0).abs() > 1e-12 {
            return fail(format!("geometry: face {f} normal is not unit length"));
        }
        if face.length <= 0.0 {
            return fail(format!("geometry: face {f} has non-positive length"));
        }
        let (pa, pb) = (mesh.vertices[a], mesh.vertices[b]);
        let mid = [0.5 * (pa[0] + pb[0]), 0.5 * (pa[1] + pb[1])];
        let t = [pb[0] - pa[0], pb[1] - pa[1]];
        if (t[0] * face.normal[0] + t[1] * face.normal[1]).abs() > 1e-12 * face.length {
            return fail(format!("geometry: face {f} normal is not orthogonal to the edge"));
        }
        let outward = |e: usize| {
            let c = mesh.centroid(e);
            (mid[0] - c[0]) * face.normal[0] + (mid[1] - c[1]) * face.normal[1]
        };
        if outward(face.plus) <= 0.0 {
            return fail(format!("orientation: face {f} normal points into its plus element"));
        }
        if let Some(m) = face.minus {
            if m <= face.plus {
                return fail(format!("orientation: face {f} plus element is not the lower index"));
            }
            if outward(m) >= 0.0 {
                return fail(format!("orientation: face {f} normal points out of its minus element"));
            }
        }
    }
    let mut uses = vec![0usize; mesh.faces.len()];
    for (e, fs) in mesh.element_faces.iter().enumerate() {
        if fs.len() != nv {
            return fail(format!("connectivity: element {e} has {} faces", fs.len()));
        }
        for &f in fs {
            match mesh.faces.get(f) {
                Some(face) if face.plus == e || face.minus == Some(e) => uses[f] += 1,
                _ => return fail(format!("connectivity: element {e} lists foreign face {f}")),
            }
        }
    }
    for (f, face) in mesh.faces.iter().enumerate() {
        let expected = if face.is_boundary() { 1 } else { 2 };
        if uses[f] != expected {
            return fail(format!(
                "connectivity: face {f} referenced {} times, expected {expected}",
                uses[f]
            ));
        }
    }
    let hmax = mesh.max_h();
    let hmin = mesh.h_elem.iter().cloned().fold(f64::INFINITY, f64::min);
    if hmin.is_nan() || hmin <= 0.0 || hmax / hmin > QUASI_UNIFORMITY_BOUND {
        return fail(format!("quasi-uniformity: h ratio {:.3}", hmax / hmin));
    }
    Diagnostics { violation: None }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SQUARE: [f64; 4] = [-1.0, 1.0, -1.0, 1.0];

    #[test]
    fn cartesian_counts_and_geometry() {
        let m = cartesian_mesh(2, 2, SQUARE).unwrap();
        assert_eq!(m.num_elements(), 4);
        assert_eq!(m.faces.len(), 12);
        assert_eq!(m.interior_faces().count(), 4);
        assert_eq!(m.boundary_faces().count(), 8);
        assert!(m.h_elem.iter().all(|h| (h - 2f64.sqrt()).abs() < 1e-15));
        assert!(m.boundary_faces().all(|(_, f)| (f.length - 1.0).abs() < 1e-15));
        assert!(validate(&m).passed());

        let m = cartesian_mesh(1, 1, SQUARE).unwrap();
        assert_eq!((m.faces.len(), m.interior_faces().count()), (4, 0));
    }

    #[test]
    fn cartesian_interior_normals_point_in_positive_axes() {
        let m = cartesian_mesh(3, 2, [0.0, 3.0, 0.0, 2.0]).unwrap();
        for (_, f) in m.interior_faces() {
            assert!(f.normal == [1.0, 0.0] || f.normal == [0.0, 1.0], "{:?}", f.normal);
        }
    }

    #[test]
    fn face_counts_follow_grid_formula() {
        for nx in 1..6 {
            for ny in 1..6 {
                let m = cartesian_mesh(nx, ny, SQUARE).unwrap();
                assert_eq!(m.faces.len(), nx * (ny + 1) + ny * (nx + 1));
                assert_eq!(m.boundary_faces().count(), 2 * (nx + ny));
            }
        }
    }

    #[test]
    fn degenerate_bounds_rejected() {
        assert!(cartesian_mesh(2, 2, [0.0, 0.0, 0.0, 1.0]).is_err());
        assert!(cartesian_mesh(0, 2, SQUARE).is_err());
    }

    #[test]
    fn lshape_geometry() {
        for diag in [LShapeDiagonal::TowardCorner, LShapeDiagonal::AwayFromCorner] {
            let m = lshape_mesh_with(diag);
            assert_eq!(m.num_elements(), 6);
            assert!((m.total_area() - 3.0).abs() < 1e-15);
            assert!(m.h_elem.iter().all(|h| (h - 2f64.sqrt()).abs() < 1e-15));
            assert!(validate(&m).passed());
        }
        let m = lshape_mesh();
        assert!(m.vertices.contains(&[0.0, 0.0]));
        let corner = m.vertices.iter().position(|v| *v == [0.0, 0.0]).unwrap();
        assert_eq!(m.elements.iter().filter(|e| e.contains(&corner)).count(), 6);
    }

    #[test]
    fn refinement() {
        let m = refine_uniform(&cartesian_mesh(2, 2, SQUARE).unwrap());
        assert_eq!(m.num_elements(), 16);
        assert!(m.h_elem.iter().all(|h| (h - 2f64.sqrt() / 2.0).abs() < 1e-15));

        let l = refine_uniform(&lshape_mesh());
        assert_eq!(l.num_elements(), 24);
        assert!((l.total_area() - 3.0).abs() < 1e-14);
        assert!(l.h_elem.iter().all(|h| (h - 2f64.sqrt() / 2.0).abs() < 1e-15));
        assert!(validate(&l).passed());
    }

    #[test]
    fn validate_reports_flipped_normal_and_duplicate_face() {
        let mut m = cartesian_mesh(2, 2, SQUARE).unwrap();
        m.faces[0].normal = [-m.faces[0].normal[0], -m.faces[0].normal[1]];
        assert!(validate(&m).violation.unwrap().starts_with("orientation"));

        let mut m = cartesian_mesh(2, 2, SQUARE).unwrap();
        let dup = m.faces[0].clone();
        m.faces.push(dup);
        assert!(validate(&m).violation.unwrap().starts_with("connectivity"));
    }

    #[test]
    fn dump_lists_vertices_then_elements() {
        let m = cartesian_mesh(1, 1, SQUARE).unwrap();
        let text = m.dump();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "kind quad");
        assert_eq!(lines.len(), 1 + 4 + 1);
        assert!(lines[1].starts_with("v 0 "));
        assert_eq!(lines[5], "e 0 0 1 3 2");
    }
}
