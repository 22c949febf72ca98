//! Geometry of the dielectric disc, the optical heat source, the microwave mode
//! volume and the clamping contacts.
//!
//! The disc cross-section is modelled as a rectangle `0 ≤ r ≤ R`, `|z| ≤ d/2`.
//! The rim curvature is carried as data only.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeviceSpec {
    /// Disc radius R (m).
    pub major_radius: f64,
    /// Rim curvature R_c (m); not meshed.
    pub side_curvature: f64,
    /// Disc thickness d (m).
    pub thickness: f64,
    /// Distance of the optical mode centre from the rim (m).
    pub source_radial_inset: f64,
    /// Radius of the circular optical-mode cross-section (m).
    pub source_cross_section_radius: f64,
    /// Radial width of the full-thickness microwave mode annulus at the rim (m).
    pub mw_annulus_width: f64,
    /// Inner radius of the clamped contact annulus on both faces (m).
    pub contact_inner_radius: f64,
    /// Outer radius of the clamped contact annulus (m).
    pub contact_outer_radius: f64,
    /// Mesh copper rings on top of the contacts, held at the boundary
    /// temperature on their outer faces, instead of clamping the disc directly.
    pub include_copper: bool,
    pub copper_shell_thickness: f64,
}

impl Default for DeviceSpec {
    fn default() -> Self {
        DeviceSpec {
            major_radius: 2.5e-3,
            side_curvature: 1.45e-3,
            thickness: 500e-6,
            source_radial_inset: 40e-6,
            source_cross_section_radius: 20e-6,
            mw_annulus_width: 500e-6,
            contact_inner_radius: 2.0e-3,
            contact_outer_radius: 2.475e-3,
            include_copper: false,
            copper_shell_thickness: 1e-3,
        }
    }
}

/// Classification of a point (or a cell centre) of the computational domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Region {
    Outside,
    Dielectric,
    MicrowaveMode,
    Source,
    ContactBoundary,
    Copper,
}

impl Region {
    pub fn name(self) -> &'static str {
        match self {
            Region::Outside => "outside",
            Region::Dielectric => "dielectric",
            Region::MicrowaveMode => "microwave-mode",
            Region::Source => "source",
            Region::ContactBoundary => "contact-boundary",
            Region::Copper => "copper",
        }
    }
}

// Points closer than this to the clamped face count as lying on it.
const FACE_TOL: f64 = 1e-13;

impl DeviceSpec {
    pub fn with_thickness(&self, thickness: f64) -> Self {
        DeviceSpec { thickness, ..self.clone() }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidParameter(format!("device: {msg}")));
        let all = [
            self.major_radius,
            self.side_curvature,
            self.thickness,
            self.source_radial_inset,
            self.source_cross_section_radius,
            self.mw_annulus_width,
            self.contact_inner_radius,
            self.contact_outer_radius,
            self.copper_shell_thickness,
        ];
        if all.iter().any(|v| !v.is_finite()) {
            return bad("all lengths must be finite");
        }
        if self.major_radius <= 0.0 {
            return bad("major_radius must be > 0");
        }
        if self.thickness <= 0.0 {
            return bad("thickness must be > 0");
        }
        if !(0.0 < self.contact_inner_radius
            && self.contact_inner_radius < self.contact_outer_radius
            && self.contact_outer_radius <= self.major_radius)
        {
            return bad("need 0 < contact_inner_radius < contact_outer_radius <= major_radius");
        }
        let rs = self.source_cross_section_radius;
        if rs < 0.0 {
            return bad("source_cross_section_radius must be >= 0");
        }
        if !(self.source_radial_inset > rs
            && self.source_radial_inset + rs < self.major_radius
            && rs < 0.5 * self.thickness)
        {
            return bad("the source torus must lie strictly inside the disc cross-section");
        }
        if !(self.mw_annulus_width > 0.0 && self.mw_annulus_width <= self.major_radius) {
            return bad("need 0 < mw_annulus_width <= major_radius");
        }
        if self.include_copper && self.copper_shell_thickness <= 0.0 {
            return bad("copper_shell_thickness must be > 0 when copper is included");
        }
        Ok(())
    }

    /// Radius of the optical-mode (heat-source) ring centre.
    pub fn source_center_radius(&self) -> f64 {
        self.major_radius - self.source_radial_inset
    }

    /// Volume of the heat-source torus, `2π(R − inset)·π·a²`.
    pub fn optical_mode_volume(&self) -> f64 {
        let a = self.source_cross_section_radius;
        2.0 * PI * self.source_center_radius() * PI * a * a
    }

    pub fn in_dielectric(&self, r: f64, z: f64) -> bool {
        r >= 0.0 && r <= self.major_radius && z.abs() <= 0.5 * self.thickness
    }

    pub fn in_source(&self, r: f64, z: f64) -> bool {
        let dr = r - self.source_center_radius();
        let a = self.source_cross_section_radius;
        dr * dr + z * z <= a * a
    }

    pub fn in_mw_mode(&self, r: f64, z: f64) -> bool {
        self.in_dielectric(r, z) && r >= self.major_radius - self.mw_annulus_width
    }

    pub fn in_contact_band(&self, r: f64) -> bool {
        r >= self.contact_inner_radius && r <= self.contact_outer_radius
    }

    pub fn in_copper(&self, r: f64, z: f64) -> bool {
        let h = 0.5 * self.thickness;
        self.include_copper && self.in_contact_band(r) && z.abs() > h && z.abs() <= h + self.copper_shell_thickness
    }

    /// Most specific region containing `(r, z)`.
    pub fn region_of(&self, r: f64, z: f64) -> Region {
        if !(r >= 0.0) {
            return Region::Outside;
        }
        if self.in_copper(r, z) {
            return Region::Copper;
        }
        if !self.in_dielectric(r, z) {
            return Region::Outside;
        }
        if (z.abs() - 0.5 * self.thickness).abs() <= FACE_TOL && self.in_contact_band(r) {
            return Region::ContactBoundary;
        }
        if self.in_source(r, z) {
            Region::Source
        } else if self.in_mw_mode(r, z) {
            Region::MicrowaveMode
        } else {
            Region::Dielectric
        }
    }
}
