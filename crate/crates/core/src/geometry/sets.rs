//! The five spreading regions predicted from the direction sets and speeds.
//!
//! Each region is star-shaped around the origin and described by a radial
//! profile; the rival's surviving region is an annulus between the refined
//! profile and the rival's free profile.

use crate::error::Error;
use crate::geometry::arcs::DirectionSet;
use crate::geometry::profile::{RefinedProfile, SpeedProfile};
use crate::vec2::Vec2;
use std::f64::consts::TAU;

/// Names the predicted regions: the free regions of each species, the
/// invasion-speed region, and the two competition-aware spreading sets.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum SetId {
    /// Free spreading region of the first species (no competition).
    WU,
    /// Free spreading region of the second species.
    WV,
    /// Invasion-speed region: the first species' unbounded cone fattened by
    /// the invasion speed.
    WUV,
    /// Spreading set of the first species under competition.
    SU,
    /// Surviving annulus of the second species.
    SV,
}

impl SetId {
    pub fn id(&self) -> &'static str {
        match self {
            SetId::WU => "w_u",
            SetId::WV => "w_v",
            SetId::WUV => "w_uv",
            SetId::SU => "s_u",
            SetId::SV => "s_v",
        }
    }
}

/// Radial descriptions of all predicted regions for one scenario.
#[derive(Clone, Debug)]
pub struct SpreadingSets {
    wu: SpeedProfile,
    wv: SpeedProfile,
    wuv: SpeedProfile,
    su: RefinedProfile,
}

impl SpreadingSets {
    /// Assembles the regions from the two base speeds, the invasion speed,
    /// and the unbounded-direction sets of the two supports.
    pub fn new(
        c_u: f64,
        c_v: f64,
        cuv: f64,
        dirs_u: DirectionSet,
        dirs_v: DirectionSet,
    ) -> Result<Self, Error> {
        let wu = SpeedProfile::new(dirs_u.clone(), c_u)?;
        let wv = SpeedProfile::new(dirs_v, c_v)?;
        let wuv = SpeedProfile::new(dirs_u, cuv)?;
        let su = RefinedProfile::new(wu.clone(), wv.clone(), cuv)?;
        Ok(SpreadingSets { wu, wv, wuv, su })
    }

    pub fn wu(&self) -> &SpeedProfile {
        &self.wu
    }

    pub fn wv(&self) -> &SpeedProfile {
        &self.wv
    }

    pub fn wuv(&self) -> &SpeedProfile {
        &self.wuv
    }

    pub fn su(&self) -> &RefinedProfile {
        &self.su
    }

    /// Radial extent of a star-shaped region along `angle`; +∞ on unbounded
    /// directions. The annulus has no single radial extent, see
    /// [`sv_interval`](Self::sv_interval).
    pub fn radial_extent(&self, set: SetId, angle: f64) -> f64 {
        match set {
            SetId::WU => self.wu.value(angle),
            SetId::WV => self.wv.value(angle),
            SetId::WUV => self.wuv.value(angle),
            SetId::SU => self.su.value(angle),
            SetId::SV => panic!("the surviving annulus is not star-shaped; use sv_interval"),
        }
    }

    /// Open radial interval of the surviving annulus along `angle`, or
    /// `None` where the second species is predicted extinct.
    pub fn sv_interval(&self, angle: f64) -> Option<(f64, f64)> {
        let wu = self.wu.value(angle);
        let wv = self.wv.value(angle);
        let dominated = if wu.is_infinite() {
            false
        } else {
            wu < wv
        };
        if !dominated {
            return None;
        }
        let su = self.su.value(angle);
        if su < wv {
            Some((su, wv))
        } else {
            None
        }
    }

    /// Open-set membership; the origin belongs to every star-shaped region
    /// and never to the annulus.
    pub fn contains(&self, set: SetId, p: Vec2) -> bool {
        let r = p.norm();
        if r == 0.0 {
            return set != SetId::SV;
        }
        let angle = p.angle();
        match set {
            SetId::SV => match self.sv_interval(angle) {
                None => false,
                Some((lo, hi)) => lo < r && r < hi,
            },
            _ => r < self.radial_extent(set, angle),
        }
    }

    /// True when no sampled direction carries a surviving annulus.
    pub fn sv_empty(&self, samples: usize) -> bool {
        (0..samples.max(64))
            .all(|k| self.sv_interval(TAU * k as f64 / samples.max(64) as f64).is_none())
    }
}
