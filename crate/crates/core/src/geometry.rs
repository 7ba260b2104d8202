//! Plane geometry for image sources and aperture diffraction.
//!
//! Aperture-plane coordinates `u` increase along the segment direction
//! `(cos θ, sin θ)`. Edge coordinates are reported relative to the point where
//! the straight line from the (effective) source to the field point crosses
//! the aperture line.

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fresnel::{fr_term, fresnel_scale, ApertureTerm, ExtReal};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    /// Unit vector at `deg` degrees CCW from +x.
    pub fn unit(deg: f64) -> Self {
        let r = deg.to_radians();
        Point2::new(r.cos(), r.sin())
    }

    pub fn dot(self, o: Point2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn cross(self, o: Point2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn distance(self, o: Point2) -> f64 {
        (self - o).norm()
    }

    /// Direction angle in degrees, normalized to [0, 360).
    pub fn angle_deg(self) -> f64 {
        normalize_deg(self.y.atan2(self.x).to_degrees())
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// Unit vector along `self` (NaN for the zero vector).
    pub fn normalized(self) -> Point2 {
        self * (1.0 / self.norm())
    }

    /// Rotate by +90°.
    pub fn perp(self) -> Point2 {
        Point2::new(-self.y, self.x)
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, o: Point2) -> Point2 {
        Point2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, o: Point2) -> Point2 {
        Point2::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    fn mul(self, k: f64) -> Point2 {
        Point2::new(self.x * k, self.y * k)
    }
}

impl Neg for Point2 {
    type Output = Point2;
    fn neg(self) -> Point2 {
        Point2::new(-self.x, -self.y)
    }
}

pub fn normalize_deg(a: f64) -> f64 {
    let r = a.rem_euclid(360.0);
    // rem_euclid can round up to exactly 360 for tiny negative inputs
    if r >= 360.0 {
        0.0
    } else {
        r
    }
}

/// A straight segment given by its center, length and direction angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub center: Point2,
    pub length: f64,
    pub angle_deg: f64,
}

impl Segment {
    pub fn new(center: Point2, length: f64, angle_deg: f64) -> Self {
        Segment {
            center,
            length,
            angle_deg: normalize_deg(angle_deg),
        }
    }

    pub fn from_endpoints(a: Point2, b: Point2) -> Self {
        let d = b - a;
        Segment::new((a + b) * 0.5, d.norm(), d.angle_deg())
    }

    pub fn direction(&self) -> Point2 {
        Point2::unit(self.angle_deg)
    }

    /// Unit normal, the direction rotated by +90°.
    pub fn normal(&self) -> Point2 {
        self.direction().perp()
    }

    pub fn endpoints(&self) -> (Point2, Point2) {
        let h = self.direction() * (0.5 * self.length);
        (self.center - h, self.center + h)
    }

    /// Signed perpendicular distance of `p` from the segment's infinite line.
    pub fn signed_distance(&self, p: Point2) -> f64 {
        (p - self.center).dot(self.normal())
    }
}

/// Reflection of `p` across the infinite line containing `plane`.
pub fn mirror_point(p: Point2, plane: &Segment) -> Point2 {
    let n = plane.normal();
    p - n * (2.0 * (p - plane.center).dot(n))
}

/// Image source of `tx` for a reflector; curved reflectors place it `R/4`
/// behind the surface on the line through `tx` and the reflector center.
pub fn effective_source(tx: Point2, reflector: &Segment, radius: Option<f64>) -> Result<Point2> {
    let scale = 1.0 + tx.distance(reflector.center);
    if reflector.signed_distance(tx).abs() <= 1e-12 * scale {
        return Err(Error::DegenerateGeometry(
            "transmitter lies on the reflector line".into(),
        ));
    }
    match radius {
        None => Ok(mirror_point(tx, reflector)),
        Some(r) if r > 0.0 && r.is_finite() => {
            let d = reflector.center - tx;
            let len = d.norm();
            Ok(reflector.center + d * (0.25 * r / len))
        }
        Some(r) => Err(Error::InvalidGeometry(format!("reflector radius must be > 0, got {r}"))),
    }
}

/// Distance parameter `ρ = r1·r2/(r1 + r2)`.
pub fn rho_param(r1: f64, r2: f64) -> Result<f64> {
    if !(r1 > 0.0 && r2 > 0.0) {
        return Err(Error::InvalidGeometry(format!(
            "distances must be > 0, got r1={r1}, r2={r2}"
        )));
    }
    if r1.is_infinite() {
        return Ok(r2);
    }
    if r2.is_infinite() {
        return Ok(r1);
    }
    Ok(r1 * r2 / (r1 + r2))
}

/// Whether the source and field point straddle the aperture line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Validity {
    Valid,
    /// Source and point lie on the same side; the diffraction formula does
    /// not apply.
    SameSide,
}

/// Where the straight source→target line meets an aperture line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineCrossing {
    /// Fraction of the way from source to target.
    pub t: f64,
    /// Signed coordinate of the crossing along the line, from its anchor.
    pub offset: f64,
    pub point: Point2,
}

pub fn cross_line(src: Point2, target: Point2, anchor: Point2, angle_deg: f64) -> Result<LineCrossing> {
    let dir = Point2::unit(angle_deg);
    let e = target - src;
    let den = e.cross(dir);
    let scale = e.norm();
    if scale == 0.0 {
        return Err(Error::DegenerateGeometry("source coincides with target".into()));
    }
    if den.abs() <= 1e-14 * scale {
        return Err(Error::NoIntersection(
            "propagation line is parallel to the aperture line".into(),
        ));
    }
    let w = anchor - src;
    let t = w.cross(dir) / den;
    let offset = w.cross(e) / den;
    Ok(LineCrossing {
        t,
        offset,
        point: anchor + dir * offset,
    })
}

/// Geometry of one Fresnel diffraction through an aperture.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiffractionGeometry {
    pub eff_source: Point2,
    pub r1: f64,
    pub r2: f64,
    pub rho: f64,
    /// Crossing coordinate measured from the aperture center (or anchor).
    pub u0: f64,
    /// Edge coordinates relative to the crossing.
    pub u1: ExtReal,
    pub u2: ExtReal,
    pub validity: Validity,
}

impl DiffractionGeometry {
    /// Fresnel arguments of both edges at frequency `f`.
    pub fn fresnel_args(&self, f: f64) -> Result<(ExtReal, ExtReal)> {
        let k = fresnel_scale(f, self.rho)?;
        Ok((self.u1.affine(0.0, k), self.u2.affine(0.0, k)))
    }

    pub fn aperture_term(&self, f: f64) -> Result<ApertureTerm> {
        let (w1, w2) = self.fresnel_args(f)?;
        fr_term(w1, w2)
    }
}

/// Project the source→target line onto a finite aperture (a reflector).
/// `r1`, `r2` are measured to the aperture center.
pub fn aperture_projection(eff: Point2, target: Point2, aperture: &Segment) -> Result<DiffractionGeometry> {
    let crossing = cross_line(eff, target, aperture.center, aperture.angle_deg)?;
    let r1 = eff.distance(aperture.center);
    let r2 = target.distance(aperture.center);
    if r1 == 0.0 || r2 == 0.0 {
        return Err(Error::DegenerateGeometry(
            "source or target at the aperture center".into(),
        ));
    }
    let rho = rho_param(r1, r2)?;
    let half = 0.5 * aperture.length;
    let u0 = crossing.offset;
    Ok(DiffractionGeometry {
        eff_source: eff,
        r1,
        r2,
        rho,
        u0,
        u1: ExtReal::Finite(-half - u0),
        u2: ExtReal::Finite(half - u0),
        validity: straddle(crossing.t),
    })
}

fn straddle(t: f64) -> Validity {
    if t > 0.0 && t < 1.0 {
        Validity::Valid
    } else {
        Validity::SameSide
    }
}

/// An opening in a straight wall: the interval `[lower, upper]` along the wall
/// line (measured from `anchor` in the wall direction) is open, the rest of the
/// line is opaque.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WallAperture {
    pub anchor: Point2,
    pub angle_deg: f64,
    pub lower: ExtReal,
    pub upper: ExtReal,
}

impl WallAperture {
    pub fn new(anchor: Point2, angle_deg: f64, lower: ExtReal, upper: ExtReal) -> Self {
        WallAperture {
            anchor,
            angle_deg: normalize_deg(angle_deg),
            lower,
            upper,
        }
    }

    pub fn direction(&self) -> Point2 {
        Point2::unit(self.angle_deg)
    }

    pub fn is_fully_open(&self) -> bool {
        self.lower == ExtReal::NegInf && self.upper == ExtReal::PosInf
    }

    /// Finite edge points of the opening.
    pub fn edges(&self) -> Vec<Point2> {
        [self.lower, self.upper]
            .iter()
            .filter_map(|e| e.as_finite())
            .map(|o| self.anchor + self.direction() * o)
            .collect()
    }

    /// The opaque parts of the wall, truncated `reach` meters from the anchor.
    pub fn wall_segments(&self, reach: f64) -> Vec<Segment> {
        let d = self.direction();
        let at = |o: f64| self.anchor + d * o;
        let mut out = Vec::new();
        if let ExtReal::Finite(lo) = self.lower {
            let start = (-reach).min(lo);
            out.push(Segment::from_endpoints(at(start), at(lo)));
        }
        if let ExtReal::Finite(hi) = self.upper {
            let end = reach.max(hi);
            out.push(Segment::from_endpoints(at(hi), at(end)));
        }
        out
    }

    /// Project the source→target line through the opening. Distances are
    /// measured to the crossing point, so `r1 + r2 = |target − src|`.
    pub fn projection(&self, src: Point2, target: Point2) -> Result<DiffractionGeometry> {
        let crossing = cross_line(src, target, self.anchor, self.angle_deg)?;
        let total = src.distance(target);
        let r1 = crossing.t * total;
        let r2 = (1.0 - crossing.t) * total;
        let validity = straddle(crossing.t);
        let rho = match validity {
            Validity::Valid => rho_param(r1, r2)?,
            Validity::SameSide => f64::NAN,
        };
        let u0 = crossing.offset;
        Ok(DiffractionGeometry {
            eff_source: src,
            r1,
            r2,
            rho,
            u0,
            u1: self.lower.affine(u0, 1.0),
            u2: self.upper.affine(u0, 1.0),
            validity,
        })
    }
}

/// Angular spread `θ = w·√(λ(r1 + r2)/(2 r1 r2))` in radians.
/// Small-angle result; no clamping is applied.
pub fn diffraction_angle(w: f64, lambda: f64, r1: f64, r2: f64) -> Result<f64> {
    if !(lambda >= 0.0) {
        return Err(Error::InvalidArgument(format!("wavelength must be >= 0, got {lambda}")));
    }
    if !(r1 > 0.0 && r2 > 0.0) {
        return Err(Error::InvalidGeometry(format!(
            "distances must be > 0, got r1={r1}, r2={r2}"
        )));
    }
    Ok(w * (lambda * (r1 + r2) / (2.0 * r1 * r2)).sqrt())
}

/// Smallest value of `|a − f1| + |a − f2|` over points `a` of a segment.
pub fn min_focal_sum(f1: Point2, f2: Point2, seg: &Segment) -> f64 {
    let (a, b) = seg.endpoints();
    let sum = |p: Point2| p.distance(f1) + p.distance(f2);
    if seg.length == 0.0 {
        return sum(a);
    }
    let n = seg.normal();
    let s1 = (f1 - seg.center).dot(n);
    let s2 = (f2 - seg.center).dot(n);
    // On the infinite line the sum is minimized where it meets the straight path
    // from f1 to f2 (or to f2's mirror image); it is convex along the line.
    let f2_eff = if s1 * s2 > 0.0 { f2 - n * (2.0 * s2) } else { f2 };
    let d = seg.direction();
    let e = f2_eff - f1;
    let den = e.cross(d);
    let t_star = if den.abs() < 1e-15 * (1.0 + e.norm()) {
        // both foci on the segment's line: any point between them is optimal
        ((f1 + f2) * 0.5 - a).dot(d)
    } else {
        (a - f1).cross(e) / den
    };
    let clamped = t_star.clamp(0.0, seg.length);
    sum(a + d * clamped).min(sum(a)).min(sum(b))
}

/// True when no obstacle enters the interior of the first Fresnel zone, the
/// ellipse with foci `tx`, `rx` whose boundary has path excess λ/2.
pub fn fresnel_zone_clear(tx: Point2, rx: Point2, lambda: f64, obstacles: &[Segment]) -> bool {
    let limit = tx.distance(rx) + 0.5 * lambda;
    let guard = 1e-12 * limit;
    obstacles.iter().all(|seg| min_focal_sum(tx, rx, seg) >= limit - guard)
}
