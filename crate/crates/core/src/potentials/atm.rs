use crate::error::Result;
use crate::params::Params;
use crate::pbc::SimBox;
use crate::vec3::Vec3;

use super::check_distance;

/// Side lengths and unit separation vectors of a particle triplet, `r_ab = p_a - p_b`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TripletGeometry {
    pub r_ij: f64,
    pub r_ik: f64,
    pub r_jk: f64,
    pub e_ij: Vec3,
    pub e_ik: Vec3,
    pub e_jk: Vec3,
}

impl TripletGeometry {
    /// Minimum-image geometry of three positions.
    pub fn new(p_i: Vec3, p_j: Vec3, p_k: Vec3, bx: &SimBox) -> Result<Self> {
        let r_ij = bx.minimum_image(p_i - p_j);
        let r_ik = bx.minimum_image(p_i - p_k);
        let r_jk = bx.minimum_image(p_j - p_k);
        Self::from_separations(r_ij, r_ik, r_jk)
    }

    pub fn from_separations(r_ij: Vec3, r_ik: Vec3, r_jk: Vec3) -> Result<Self> {
        let (a, b, c) = (r_ij.norm(), r_ik.norm(), r_jk.norm());
        check_distance(a)?;
        check_distance(b)?;
        check_distance(c)?;
        Ok(TripletGeometry { r_ij: a, r_ik: b, r_jk: c, e_ij: r_ij / a, e_ik: r_ik / b, e_jk: r_jk / c })
    }

    /// Planar triangle with the given sides (unit vectors approximate when the sides violate the triangle inequality).
    #[cfg(test)]
    pub(crate) fn from_lengths(a: f64, b: f64, c: f64) -> Self {
        let x = (a * a + b * b - c * c) / (2.0 * a);
        let y = (b * b - x * x).max(0.0).sqrt();
        let (pi, pj, pk) = (Vec3::ZERO, Vec3::new(a, 0.0, 0.0), Vec3::new(x, y, 0.0));
        let unit = |v: Vec3| if v.norm() > 0.0 { v / v.norm() } else { v };
        TripletGeometry { r_ij: a, r_ik: b, r_jk: c, e_ij: unit(pi - pj), e_ik: unit(pi - pk), e_jk: unit(pj - pk) }
    }
}

/// Composite and primitive forces of one triplet.
///
/// `on_i_from_j` is the force on i due to j in the presence of k, directed along `e_ij`;
/// likewise `on_i_from_k` along `e_ik` and `on_j_from_k` along `e_jk`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ForceTriple {
    pub f_i: Vec3,
    pub f_j: Vec3,
    pub f_k: Vec3,
    pub on_i_from_j: Vec3,
    pub on_i_from_k: Vec3,
    pub on_j_from_k: Vec3,
}

impl ForceTriple {
    fn from_primitives(on_i_from_j: Vec3, on_i_from_k: Vec3, on_j_from_k: Vec3) -> Self {
        ForceTriple {
            f_i: on_i_from_j + on_i_from_k,
            f_j: on_j_from_k - on_i_from_j,
            f_k: -on_i_from_k - on_j_from_k,
            on_i_from_j,
            on_i_from_k,
            on_j_from_k,
        }
    }
}

/// Forces, energy and virial of one triplet.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TripletTerms {
    pub forces: ForceTriple,
    pub energy: f64,
    /// `r_ij . F_i(j) + r_ik . F_i(k) + r_jk . F_j(k)`.
    pub virial: f64,
}

/// Triple-dipole energy from the three side lengths.
pub fn atm_energy(r_ij: f64, r_ik: f64, r_jk: f64, nu: f64) -> Result<f64> {
    check_distance(r_ij)?;
    check_distance(r_ik)?;
    check_distance(r_jk)?;
    Ok(energy_sq(r_ij * r_ij, r_ik * r_ik, r_jk * r_jk, nu))
}

/// Partial derivatives of the triple-dipole energy with respect to `r_ij`, `r_ik`, `r_jk`.
pub fn atm_gradient(r_ij: f64, r_ik: f64, r_jk: f64, nu: f64) -> Result<(f64, f64, f64)> {
    check_distance(r_ij)?;
    check_distance(r_ik)?;
    check_distance(r_jk)?;
    let (a2, b2, c2) = (r_ij * r_ij, r_ik * r_ik, r_jk * r_jk);
    let p = a2 * b2 * c2;
    let scale = 3.0 * nu / (8.0 * p * p * p.sqrt());
    Ok((
        scale * side_poly(a2, b2, c2) / r_ij,
        scale * side_poly(b2, a2, c2) / r_ik,
        scale * side_poly(c2, a2, b2) / r_jk,
    ))
}

#[inline(always)]
fn energy_sq(a2: f64, b2: f64, c2: f64, nu: f64) -> f64 {
    let x = -a2 + b2 + c2;
    let y = a2 - b2 + c2;
    let z = a2 + b2 - c2;
    let p = a2 * b2 * c2;
    nu / (p * p.sqrt()) * (1.0 + 3.0 * x * y * z / (8.0 * p))
}

/// Numerator of the derivative with respect to the side whose square is `s`,
/// the other two squared sides being `t` and `w` (symmetric in those two).
#[inline(always)]
fn side_poly(s: f64, t: f64, w: f64) -> f64 {
    let s2 = s * s;
    let t2 = t * t;
    let w2 = w * w;
    -s2 * s - s2 * t - s2 * w - 3.0 * s * t2 - 2.0 * s * t * w - 3.0 * s * w2 + 5.0 * t2 * t
        - 5.0 * t2 * w
        - 5.0 * t * w2
        + 5.0 * w2 * w
}

/// Energy and the three primitive force coefficients from squared sides.
///
/// The primitive forces are `c_ij * r_ij`, `c_ik * r_ik` and `c_jk * r_jk`;
/// the triplet virial is `c_ij a2 + c_ik b2 + c_jk c2`.
#[inline(always)]
pub(crate) fn atm_kernel(a2: f64, b2: f64, c2: f64, nu: f64) -> (f64, f64, f64, f64) {
    let x = -a2 + b2 + c2;
    let y = a2 - b2 + c2;
    let z = a2 + b2 - c2;
    let p = a2 * b2 * c2;
    let inv3 = 1.0 / (p * p.sqrt());
    let energy = nu * inv3 * (1.0 + 3.0 * x * y * z / (8.0 * p));
    let scale = -3.0 * nu * inv3 / (8.0 * p);
    (energy, scale * side_poly(a2, b2, c2) / a2, scale * side_poly(b2, a2, c2) / b2, scale * side_poly(c2, a2, b2) / c2)
}

/// Forces, energy and virial from the three separation vectors `r_ij`, `r_ik`, `r_jk`.
pub fn force_triple_from_separations(r_ij: Vec3, r_ik: Vec3, r_jk: Vec3, nu: f64) -> Result<TripletTerms> {
    let (a2, b2, c2) = (r_ij.norm2(), r_ik.norm2(), r_jk.norm2());
    check_distance(a2.sqrt())?;
    check_distance(b2.sqrt())?;
    check_distance(c2.sqrt())?;
    let (energy, c_ij, c_ik, c_jk) = atm_kernel(a2, b2, c2, nu);
    Ok(TripletTerms {
        forces: ForceTriple::from_primitives(r_ij * c_ij, r_ik * c_ik, r_jk * c_jk),
        energy,
        virial: c_ij * a2 + c_ik * b2 + c_jk * c2,
    })
}

/// Triplet forces and energy at minimum-image separations.
pub fn force_triple(p_i: Vec3, p_j: Vec3, p_k: Vec3, bx: &SimBox, params: &Params) -> Result<(ForceTriple, f64)> {
    let t = force_triple_from_separations(
        bx.minimum_image(p_i - p_j),
        bx.minimum_image(p_i - p_k),
        bx.minimum_image(p_j - p_k),
        params.nu,
    )?;
    Ok((t.forces, t.energy))
}
