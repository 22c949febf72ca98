//! Structured axisymmetric (r, z) finite-volume mesh.
//!
//! Cells are annular rings with rectangular cross-section. Spacing is graded
//! geometrically away from the heat-source torus so the optical mode is
//! resolved while the rest of the disc stays coarse. Only cells inside the
//! material (dielectric or copper) are kept.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::device::{DeviceSpec, Region};
use crate::error::{Error, Result};
use crate::materials::MaterialSlot;

/// Per-cell spacing growth away from the refined band.
const GROWTH: f64 = 0.15;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeshParams {
    /// Coarse cell count across the radius.
    pub nr: usize,
    /// Coarse cell count across the thickness.
    pub nz: usize,
    /// Cells per source cross-section radius inside the refined band; ≤ 1 disables refinement.
    pub refine_source: f64,
}

impl Default for MeshParams {
    fn default() -> Self {
        MeshParams { nr: 128, nz: 32, refine_source: 5.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub ir: usize,
    pub iz: usize,
    pub r: f64,
    pub z: f64,
    pub volume: f64,
    pub region: Region,
    pub material: MaterialSlot,
    /// Inside the microwave mode annulus (source cells included).
    pub in_mw_mode: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InteriorFace {
    pub a: usize,
    pub b: usize,
    pub area: f64,
    pub dist_a: f64,
    pub dist_b: f64,
    pub axial: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundaryKind {
    /// Held at the temperature of the given boundary group.
    Dirichlet {
        group: usize,
    },
    Adiabatic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryFace {
    pub cell: usize,
    pub area: f64,
    /// Distance from the cell centre to the face.
    pub dist: f64,
    /// Outward unit normal as (n_r, n_z).
    pub normal: (f64, f64),
    pub kind: BoundaryKind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxiMesh {
    pub r_faces: Vec<f64>,
    pub z_faces: Vec<f64>,
    pub cells: Vec<Cell>,
    pub faces: Vec<InteriorFace>,
    pub boundary: Vec<BoundaryFace>,
}

/// One value per mesh cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalarField(pub Vec<f64>);

impl ScalarField {
    pub fn uniform(mesh: &AxiMesh, value: f64) -> Self {
        ScalarField(vec![value; mesh.cells.len()])
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn min(&self) -> f64 {
        self.0.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.0.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

struct Band {
    center: f64,
    half_width: f64,
    fine: f64,
}

/// Faces on `[lo, hi]` with coarse spacing `(hi - lo)/n`, refined to `band.fine`
/// inside the band and growing by at most `1 + GROWTH` per cell outside it.
fn graded_faces(lo: f64, hi: f64, n: usize, band: Option<Band>) -> Vec<f64> {
    let coarse = (hi - lo) / n as f64;
    let band = match band {
        Some(b) if b.fine < coarse => b,
        _ => return (0..=n).map(|k| lo + (hi - lo) * k as f64 / n as f64).collect(),
    };
    let spacing = |x: f64| {
        let dist = ((x - band.center).abs() - band.half_width).max(0.0);
        (band.fine + GROWTH * dist).min(coarse)
    };
    // cumulative cell count ξ(x) = ∫ dx / h(x), inverted by interpolation
    let samples = 20_000;
    let xs: Vec<f64> = (0..=samples).map(|k| lo + (hi - lo) * k as f64 / samples as f64).collect();
    let mut xi = vec![0.0; samples + 1];
    for k in 1..=samples {
        let h = xs[k] - xs[k - 1];
        xi[k] = xi[k - 1] + 0.5 * h * (1.0 / spacing(xs[k - 1]) + 1.0 / spacing(xs[k]));
    }
    let total = xi[samples];
    let cells = total.ceil().max(1.0) as usize;
    let mut faces = Vec::with_capacity(cells + 1);
    faces.push(lo);
    let mut k = 1;
    for m in 1..cells {
        let target = total * m as f64 / cells as f64;
        while xi[k] < target {
            k += 1;
        }
        let w = (target - xi[k - 1]) / (xi[k] - xi[k - 1]);
        faces.push(xs[k - 1] + w * (xs[k] - xs[k - 1]));
    }
    faces.push(hi);
    faces
}

impl AxiMesh {
    /// Meshes the device cross-section.
    pub fn build(spec: &DeviceSpec, params: &MeshParams) -> Result<Self> {
        spec.validate()?;
        if params.nr < 4 || params.nz < 4 {
            return Err(Error::Mesh(format!("need nr, nz >= 4 (got {}, {})", params.nr, params.nz)));
        }
        let rs = spec.source_cross_section_radius;
        let band = |center: f64| {
            (params.refine_source > 1.0).then(|| Band { center, half_width: 1.5 * rs, fine: rs / params.refine_source })
        };
        let r_faces = graded_faces(0.0, spec.major_radius, params.nr, band(spec.source_center_radius()));
        let h = 0.5 * spec.thickness;
        let mut z_faces = graded_faces(-h, h, params.nz, band(0.0));
        if spec.include_copper {
            let coarse = spec.thickness / params.nz as f64;
            let n_cu = ((spec.copper_shell_thickness / coarse).ceil() as usize).clamp(4, 64);
            let dz = spec.copper_shell_thickness / n_cu as f64;
            let below: Vec<f64> = (1..=n_cu).rev().map(|k| -h - k as f64 * dz).collect();
            let above: Vec<f64> = (1..=n_cu).map(|k| h + k as f64 * dz).collect();
            z_faces = below.into_iter().chain(z_faces).chain(above).collect();
        }
        let mesh = Self::assemble(spec, r_faces, z_faces);
        mesh.check_source_resolved()?;
        Ok(mesh)
    }

    fn assemble(spec: &DeviceSpec, r_faces: Vec<f64>, z_faces: Vec<f64>) -> Self {
        let nr = r_faces.len() - 1;
        let nz = z_faces.len() - 1;
        let h = 0.5 * spec.thickness;
        let mut index = vec![None; nr * nz];
        let mut cells = Vec::new();
        for ir in 0..nr {
            for iz in 0..nz {
                let r = 0.5 * (r_faces[ir] + r_faces[ir + 1]);
                let z = 0.5 * (z_faces[iz] + z_faces[iz + 1]);
                let region = spec.region_of(r, z);
                if region == Region::Outside {
                    continue;
                }
                let material = if region == Region::Copper { MaterialSlot::Copper } else { MaterialSlot::Dielectric };
                index[ir * nz + iz] = Some(cells.len());
                cells.push(Cell {
                    ir,
                    iz,
                    r,
                    z,
                    volume: PI * (r_faces[ir + 1].powi(2) - r_faces[ir].powi(2)) * (z_faces[iz + 1] - z_faces[iz]),
                    region,
                    material,
                    in_mw_mode: spec.in_mw_mode(r, z),
                });
            }
        }
        let at = |ir: usize, iz: usize| index[ir * nz + iz];
        let is_dirichlet = |cell: &Cell, z_face: f64| -> bool {
            if spec.include_copper {
                cell.material == MaterialSlot::Copper && z_face.abs() > h + 0.5 * spec.copper_shell_thickness
            } else {
                (z_face.abs() - h).abs() < 1e-9 * spec.thickness && spec.in_contact_band(cell.r)
            }
        };
        let mut faces = Vec::new();
        let mut boundary = Vec::new();
        for (ci, c) in cells.iter().enumerate() {
            let dz = z_faces[c.iz + 1] - z_faces[c.iz];
            let dr = r_faces[c.ir + 1] - r_faces[c.ir];
            // outer radial face
            let rf = r_faces[c.ir + 1];
            let area = 2.0 * PI * rf * dz;
            match (c.ir + 1 < nr).then(|| at(c.ir + 1, c.iz)).flatten() {
                Some(nb) => faces.push(InteriorFace {
                    a: ci,
                    b: nb,
                    area,
                    dist_a: rf - c.r,
                    dist_b: cells[nb].r - rf,
                    axial: false,
                }),
                None => boundary.push(BoundaryFace {
                    cell: ci,
                    area,
                    dist: rf - c.r,
                    normal: (1.0, 0.0),
                    kind: BoundaryKind::Adiabatic,
                }),
            }
            // inner radial face (the axis has zero area and is skipped)
            if c.ir > 0 && at(c.ir - 1, c.iz).is_none() {
                let rf = r_faces[c.ir];
                boundary.push(BoundaryFace {
                    cell: ci,
                    area: 2.0 * PI * rf * dz,
                    dist: c.r - rf,
                    normal: (-1.0, 0.0),
                    kind: BoundaryKind::Adiabatic,
                });
            }
            let area = PI * (r_faces[c.ir + 1].powi(2) - r_faces[c.ir].powi(2));
            let _ = dr;
            // upper axial face
            let zf = z_faces[c.iz + 1];
            match (c.iz + 1 < nz).then(|| at(c.ir, c.iz + 1)).flatten() {
                Some(nb) => faces.push(InteriorFace {
                    a: ci,
                    b: nb,
                    area,
                    dist_a: zf - c.z,
                    dist_b: cells[nb].z - zf,
                    axial: true,
                }),
                None => boundary.push(BoundaryFace {
                    cell: ci,
                    area,
                    dist: zf - c.z,
                    normal: (0.0, 1.0),
                    kind: if is_dirichlet(c, zf) {
                        BoundaryKind::Dirichlet { group: 0 }
                    } else {
                        BoundaryKind::Adiabatic
                    },
                }),
            }
            // lower axial face
            let zf = z_faces[c.iz];
            if c.iz == 0 || at(c.ir, c.iz - 1).is_none() {
                boundary.push(BoundaryFace {
                    cell: ci,
                    area,
                    dist: c.z - zf,
                    normal: (0.0, -1.0),
                    kind: if is_dirichlet(c, zf) {
                        BoundaryKind::Dirichlet { group: 0 }
                    } else {
                        BoundaryKind::Adiabatic
                    },
                });
            }
        }
        AxiMesh { r_faces, z_faces, cells, faces, boundary }
    }

    /// A single radial column `0 ≤ r ≤ radius`, `0 ≤ z ≤ length`, with the
    /// bottom face in Dirichlet group 0 and the top face in group 1. Heat flows
    /// only along z, so this is an exact one-dimensional slab.
    pub fn slab(length: f64, cells: usize, radius: f64) -> Result<Self> {
        if !(length > 0.0 && radius > 0.0) || cells < 2 {
            return Err(Error::Mesh("slab needs positive size and at least 2 cells".into()));
        }
        let z_faces: Vec<f64> = (0..=cells).map(|k| length * k as f64 / cells as f64).collect();
        let area = PI * radius * radius;
        let cells_v: Vec<Cell> = (0..cells)
            .map(|k| Cell {
                ir: 0,
                iz: k,
                r: 0.5 * radius,
                z: 0.5 * (z_faces[k] + z_faces[k + 1]),
                volume: area * (z_faces[k + 1] - z_faces[k]),
                region: Region::Dielectric,
                material: MaterialSlot::Dielectric,
                in_mw_mode: false,
            })
            .collect();
        let faces = (0..cells - 1)
            .map(|k| InteriorFace {
                a: k,
                b: k + 1,
                area,
                dist_a: z_faces[k + 1] - cells_v[k].z,
                dist_b: cells_v[k + 1].z - z_faces[k + 1],
                axial: true,
            })
            .collect();
        let boundary = vec![
            BoundaryFace {
                cell: 0,
                area,
                dist: cells_v[0].z,
                normal: (0.0, -1.0),
                kind: BoundaryKind::Dirichlet { group: 0 },
            },
            BoundaryFace {
                cell: cells - 1,
                area,
                dist: length - cells_v[cells - 1].z,
                normal: (0.0, 1.0),
                kind: BoundaryKind::Dirichlet { group: 1 },
            },
            BoundaryFace { cell: 0, area: 0.0, dist: 0.5 * radius, normal: (1.0, 0.0), kind: BoundaryKind::Adiabatic },
        ];
        Ok(AxiMesh { r_faces: vec![0.0, radius], z_faces, cells: cells_v, faces, boundary })
    }

    fn check_source_resolved(&self) -> Result<()> {
        let mut rows = std::collections::BTreeSet::new();
        let mut cols = std::collections::BTreeSet::new();
        for c in self.cells.iter().filter(|c| c.region == Region::Source) {
            rows.insert(c.iz);
            cols.insert(c.ir);
        }
        if rows.len() < 2 || cols.len() < 2 {
            return Err(Error::Mesh(format!(
                "heat source spans {} radial x {} axial cells; refine the mesh",
                cols.len(),
                rows.len()
            )));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Largest index distance between face neighbours.
    pub fn bandwidth(&self) -> usize {
        self.faces.iter().map(|f| f.a.abs_diff(f.b)).max().unwrap_or(0)
    }

    pub fn in_region(&self, cell: usize, region: Region) -> bool {
        let c = &self.cells[cell];
        match region {
            Region::MicrowaveMode => c.in_mw_mode,
            Region::Dielectric => c.material == MaterialSlot::Dielectric,
            other => c.region == other,
        }
    }

    pub fn region_volume(&self, region: Region) -> f64 {
        (0..self.len()).filter(|&i| self.in_region(i, region)).map(|i| self.cells[i].volume).sum()
    }

    pub fn dirichlet_area(&self) -> f64 {
        self.boundary.iter().filter(|b| matches!(b.kind, BoundaryKind::Dirichlet { .. })).map(|b| b.area).sum()
    }

    pub fn dirichlet_groups(&self) -> usize {
        self.boundary
            .iter()
            .filter_map(|b| match b.kind {
                BoundaryKind::Dirichlet { group } => Some(group + 1),
                BoundaryKind::Adiabatic => None,
            })
            .max()
            .unwrap_or(0)
    }
}

/// Volume-weighted mean of `field` over the cells belonging to `region`.
pub fn volume_average(field: &ScalarField, mesh: &AxiMesh, region: Region) -> Result<f64> {
    let mut num = 0.0;
    let mut den = 0.0;
    for (i, c) in mesh.cells.iter().enumerate() {
        if mesh.in_region(i, region) {
            num += field.0[i] * c.volume;
            den += c.volume;
        }
    }
    if den == 0.0 {
        return Err(Error::EmptyRegion(region.name()));
    }
    Ok(num / den)
}
