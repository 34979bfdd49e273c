use super::{ElementBasis, FeSpace, SpaceCore};
use crate::error::{Error, Result};
use crate::mesh::{ElementKind, Mesh};

/// Continuous piecewise polynomials of tensor degree `p` on a Cartesian
/// grid, built from the hierarchical basis.
///
/// Global unknowns live on the lattice of `(nx·p + 1) × (ny·p + 1)` 1D
/// index pairs: vertex functions sit on multiples of `p`, edge and
/// interior bubbles in between.
#[derive(Debug, Clone)]
pub struct C0Space {
    pub core: SpaceCore,
    nx: usize,
    ny: usize,
    l2g: Vec<Vec<usize>>,
    boundary: Vec<bool>,
}

pub fn build_c0_space(mesh: &Mesh, p: usize) -> Result<C0Space> {
    if p < 2 {
        return Err(Error::precondition("C0 space needs p >= 2"));
    }
    if mesh.kind != ElementKind::Quad {
        return Err(Error::UnsupportedMesh("C0 space needs quadrilaterals".into()));
    }
    let layout = mesh
        .cartesian
        .ok_or_else(|| Error::UnsupportedMesh("C0 space needs a Cartesian grid".into()))?;
    let (nx, ny) = (layout.nx, layout.ny);
    let line = |e: usize, i: usize| match i {
        0 => e * p,
        1 => (e + 1) * p,
        k => e * p + k - 1,
    };
    let width = nx * p + 1;
    let l2g = (0..nx * ny)
        .map(|e| {
            let (ex, ey) = (e % nx, e / nx);
            let mut dofs = Vec::with_capacity((p + 1) * (p + 1));
            for i in 0..=p {
                for j in 0..=p {
                    dofs.push(line(ey, j) * width + line(ex, i));
                }
            }
            dofs
        })
        .collect();
    let ndofs = width * (ny * p + 1);
    let boundary = (0..ndofs)
        .map(|g| {
            let (gx, gy) = (g % width, g / width);
            gx == 0 || gx == nx * p || gy == 0 || gy == ny * p
        })
        .collect();
    Ok(C0Space {
        core: SpaceCore::new(mesh.clone(), p, ElementBasis::QuadHierarchical),
        nx,
        ny,
        l2g,
        boundary,
    })
}

impl FeSpace for C0Space {
    fn core(&self) -> &SpaceCore {
        &self.core
    }

    fn ndofs(&self) -> usize {
        (self.nx * self.core.p + 1) * (self.ny * self.core.p + 1)
    }

    fn element_dofs(&self, e: usize) -> Vec<usize> {
        self.l2g[e].clone()
    }
}

impl C0Space {
    /// Whether global unknown `g` has a nonzero trace on `∂Ω`.
    pub fn is_boundary_dof(&self, g: usize) -> bool {
        self.boundary[g]
    }

    pub fn interior_dofs(&self) -> Vec<usize> {
        (0..self.ndofs()).filter(|&g| !self.boundary[g]).collect()
    }
}
