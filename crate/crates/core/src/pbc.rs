//! Orthorhombic periodic box and image arithmetic.

use crate::error::{Error, Result};
use crate::vec3::Vec3;

/// Fully periodic orthorhombic simulation box.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SimBox {
    lengths: Vec3,
}

impl SimBox {
    pub fn new(lx: f64, ly: f64, lz: f64) -> Result<Self> {
        let lengths = Vec3::new(lx, ly, lz);
        if !lengths.is_finite() || lx <= 0.0 || ly <= 0.0 || lz <= 0.0 {
            return Err(Error::config(format!("box lengths must be finite and positive, got ({lx}, {ly}, {lz})")));
        }
        Ok(SimBox { lengths })
    }

    pub fn cubic(l: f64) -> Result<Self> {
        SimBox::new(l, l, l)
    }

    #[inline]
    pub fn lengths(&self) -> Vec3 {
        self.lengths
    }

    pub fn volume(&self) -> f64 {
        self.lengths.x * self.lengths.y * self.lengths.z
    }

    /// Rejects boxes in which the minimum image would not be unique within `r_c`.
    pub fn check_cutoff(&self, r_c: f64) -> Result<()> {
        let l = self.lengths;
        let shortest = l.x.min(l.y).min(l.z);
        if shortest < 2.0 * r_c {
            return Err(Error::config(format!("box edge {shortest} is shorter than twice the cutoff {r_c}")));
        }
        Ok(())
    }

    #[inline]
    pub fn minimum_image(&self, dr: Vec3) -> Vec3 {
        dr.zip_map(self.lengths, image_component)
    }

    #[inline]
    pub fn wrap(&self, p: Vec3) -> Vec3 {
        p.zip_map(self.lengths, wrap_component)
    }
}

#[inline]
fn image_component(d: f64, l: f64) -> f64 {
    let mut r = d - l * (d / l + 0.5).floor();
    if r >= 0.5 * l {
        r -= l;
    } else if r < -0.5 * l {
        r += l;
    }
    r
}

#[inline]
fn wrap_component(p: f64, l: f64) -> f64 {
    let mut r = p - l * (p / l).floor();
    if r >= l {
        r -= l;
    }
    if r < 0.0 {
        r = 0.0;
    }
    r
}

/// Nearest periodic image of a displacement, components in `[-L/2, L/2)`.
pub fn minimum_image(dr: Vec3, bx: &SimBox) -> Vec3 {
    bx.minimum_image(dr)
}

/// Position folded into the primary box, components in `[0, L)`.
pub fn wrap_position(p: Vec3, bx: &SimBox) -> Vec3 {
    bx.wrap(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn b10() -> SimBox {
        SimBox::cubic(10.0).unwrap()
    }

    #[test]
    fn image_examples() {
        let b = b10();
        assert_eq!(minimum_image(Vec3::ZERO, &b), Vec3::ZERO);
        assert_eq!(minimum_image(Vec3::new(9.0, 0.0, 0.0), &b), Vec3::new(-1.0, 0.0, 0.0));
        assert_eq!(minimum_image(Vec3::splat(5.0), &b), Vec3::splat(-5.0));
        assert_eq!(minimum_image(Vec3::splat(-5.0), &b), Vec3::splat(-5.0));
    }

    #[test]
    fn wrap_examples() {
        let b = SimBox::cubic(12.5).unwrap();
        let w = wrap_position(Vec3::new(12.6, 0.0, 0.0), &b);
        assert!((w.x - 0.1).abs() < 1e-12 && w.y == 0.0 && w.z == 0.0);
        let w = wrap_position(Vec3::new(-0.1, 0.0, 0.0), &b);
        assert!((w.x - 12.4).abs() < 1e-12);
        assert_eq!(wrap_position(Vec3::splat(3.0), &b), Vec3::splat(3.0));
        let w = wrap_position(Vec3::new(-1e-17, 0.0, 0.0), &b);
        assert!(w.x >= 0.0 && w.x < 12.5);
    }

    #[test]
    fn invalid_boxes() {
        assert!(SimBox::new(0.0, 1.0, 1.0).is_err());
        assert!(SimBox::new(1.0, -1.0, 1.0).is_err());
        assert!(SimBox::new(f64::NAN, 1.0, 1.0).is_err());
        assert!(SimBox::cubic(4.9).unwrap().check_cutoff(2.5).is_err());
        assert!(SimBox::cubic(5.0).unwrap().check_cutoff(2.5).is_ok());
    }

    fn comp() -> impl Strategy<Value = f64> {
        -100.0f64..100.0
    }

    fn lengths() -> impl Strategy<Value = SimBox> {
        (1.0f64..30.0, 1.0f64..30.0, 1.0f64..30.0).prop_map(|(a, b, c)| SimBox::new(a, b, c).unwrap())
    }

    proptest! {
        #[test]
        fn image_in_half_open_range(b in lengths(), x in comp(), y in comp(), z in comp()) {
            let r = b.minimum_image(Vec3::new(x, y, z));
            let l = b.lengths();
            for a in 0..3 {
                prop_assert!(r[a] >= -0.5 * l[a] && r[a] < 0.5 * l[a]);
            }
        }

        #[test]
        fn image_differs_by_box_multiples(b in lengths(), x in comp(), y in comp(), z in comp()) {
            let d = Vec3::new(x, y, z);
            let r = b.minimum_image(d);
            let l = b.lengths();
            for a in 0..3 {
                let k = (d[a] - r[a]) / l[a];
                prop_assert!((k - k.round()).abs() < 1e-9);
            }
        }

        #[test]
        fn image_idempotent(b in lengths(), x in comp(), y in comp(), z in comp()) {
            let r = b.minimum_image(Vec3::new(x, y, z));
            prop_assert_eq!(b.minimum_image(r), r);
        }

        #[test]
        fn image_never_longer(b in lengths(), x in comp(), y in comp(), z in comp()) {
            let d = Vec3::new(x, y, z);
            prop_assert!(b.minimum_image(d).norm() <= d.norm() + 1e-12);
        }

        #[test]
        fn wrap_in_range(b in lengths(), x in comp(), y in comp(), z in comp()) {
            let w = b.wrap(Vec3::new(x, y, z));
            let l = b.lengths();
            for a in 0..3 {
                prop_assert!(w[a] >= 0.0 && w[a] < l[a]);
            }
        }

        #[test]
        fn image_of_wrapped_pair_ignores_box_shifts(
            b in lengths(),
            p in (comp(), comp(), comp()),
            q in (comp(), comp(), comp()),
            axis in 0usize..3,
        ) {
            let p = b.wrap(Vec3::new(p.0, p.1, p.2));
            let q = b.wrap(Vec3::new(q.0, q.1, q.2));
            let base = b.minimum_image(p - q);
            let mut shift = Vec3::ZERO;
            match axis {
                0 => shift.x = b.lengths().x,
                1 => shift.y = b.lengths().y,
                _ => shift.z = b.lengths().z,
            }
            let moved = b.minimum_image(p + shift - q);
            prop_assert!((moved - base).max_abs() < 1e-9);
        }
    }
}
