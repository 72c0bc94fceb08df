use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::Rational;

/// The arithmetic ray `{start + j * step : j >= 0}` in Q, `step != 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ray {
    pub start: Rational,
    pub step: Rational,
}

impl Ray {
    pub fn new(start: Rational, step: Rational) -> Ray {
        assert!(!step.is_zero(), "ray step must be nonzero");
        Ray { start, step }
    }

    /// The index `j` with `start + j * step == x`, if any.
    pub fn index_of(&self, x: &Rational) -> Option<BigInt> {
        let j = (x - &self.start) / self.step.clone();
        (j.is_integer() && !j.is_negative()).then(|| j.numer().clone())
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.index_of(x).is_some()
    }

    pub fn point(&self, j: &BigInt) -> Rational {
        &self.start + &(&self.step * &Rational::from_int(j.clone()))
    }

    pub fn shift(&self, by: &Rational) -> Ray {
        Ray::new(&self.start + by, self.step.clone())
    }

    /// `self ⊆ other` for a single ray.
    pub fn is_subray_of(&self, other: &Ray) -> bool {
        let ratio = &self.step / &other.step;
        other.contains(&self.start) && ratio.is_integer() && ratio.is_positive()
    }

    /// Exact intersection of two rays: empty, finite, or a ray.
    pub fn intersect(&self, other: &Ray) -> QSet {
        let l = [&self.start, &self.step, &other.start, &other.step]
            .iter()
            .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        let scale = |q: &Rational| (q * &Rational::from_int(l.clone())).numer().clone();
        let (s1, d1, s2, d2) = (scale(&self.start), scale(&self.step), scale(&other.start), scale(&other.step));
        // solve i*d1 - j*d2 = s2 - s1 with i, j >= 0
        let c = &s2 - &s1;
        let eg = d1.abs().extended_gcd(&d2.abs());
        let g = eg.gcd;
        if !(&c % &g).is_zero() {
            return QSet::empty();
        }
        let u = if d1.is_negative() { -eg.x } else { eg.x };
        let v = if d2.is_negative() { -eg.y } else { eg.y };
        let i0 = &u * &c / &g;
        let j0 = -(&v * &c / &g);
        let mut alpha = &d2 / &g;
        let mut beta = &d1 / &g;
        // i = i0 + alpha t, j = j0 + beta t
        if alpha.signum() == beta.signum() {
            if alpha.is_negative() {
                alpha = -alpha;
                beta = -beta;
            }
            let t0 = (-&i0).div_ceil(&alpha).max((-&j0).div_ceil(&beta));
            let i = &i0 + &alpha * &t0;
            let start = self.point(&i);
            let step = &self.step * &Rational::from_int(alpha);
            return QSet::from_ray(Ray::new(start, step));
        }
        let (lo, hi) = if alpha.is_positive() {
            ((-&i0).div_ceil(&alpha), (-&j0).div_floor(&beta))
        } else {
            ((-&j0).div_ceil(&beta), (-&i0).div_floor(&alpha))
        };
        let mut out = QSet::empty();
        let mut t = lo;
        while t <= hi {
            out.points.insert(self.point(&(&i0 + &alpha * &t)));
            t += 1;
        }
        out
    }
}

/// A subset of Q given as finitely many points together with finitely many
/// rays. Closed under translation, union and intersection.
#[derive(Clone, Debug, Default)]
pub struct QSet {
    points: BTreeSet<Rational>,
    rays: Vec<Ray>,
}

impl QSet {
    pub fn empty() -> QSet {
        QSet::default()
    }

    pub fn from_points(points: impl IntoIterator<Item = Rational>) -> QSet {
        QSet { points: points.into_iter().collect(), rays: Vec::new() }
    }

    pub fn from_ray(ray: Ray) -> QSet {
        QSet { points: BTreeSet::new(), rays: vec![ray] }
    }

    pub fn points(&self) -> &BTreeSet<Rational> {
        &self.points
    }

    pub fn rays(&self) -> &[Ray] {
        &self.rays
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty() && self.rays.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.rays.is_empty()
    }

    /// Number of elements, when finite.
    pub fn finite_len(&self) -> Option<usize> {
        self.is_finite().then_some(self.points.len())
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.points.contains(x) || self.rays.iter().any(|r| r.contains(x))
    }

    pub fn shift(&self, by: &Rational) -> QSet {
        QSet {
            points: self.points.iter().map(|p| p + by).collect(),
            rays: self.rays.iter().map(|r| r.shift(by)).collect(),
        }
        .normalized()
    }

    pub fn union(&self, other: &QSet) -> QSet {
        let mut out = self.clone();
        out.points.extend(other.points.iter().cloned());
        out.rays.extend(other.rays.iter().cloned());
        out.normalized()
    }

    pub fn intersect(&self, other: &QSet) -> QSet {
        let mut out = QSet::empty();
        for p in &self.points {
            if other.contains(p) {
                out.points.insert(p.clone());
            }
        }
        for p in &other.points {
            if self.contains(p) {
                out.points.insert(p.clone());
            }
        }
        for a in &self.rays {
            for b in &other.rays {
                out = out.union(&a.intersect(b));
            }
        }
        out.normalized()
    }

    pub fn is_subset(&self, other: &QSet) -> bool {
        self.points.iter().all(|p| other.contains(p)) && self.rays.iter().all(|r| other.covers_ray(r))
    }

    pub fn same_set(&self, other: &QSet) -> bool {
        self.is_subset(other) && other.is_subset(self)
    }

    /// Whether every point of `ray` lies in `self`. Coverage of the ray's
    /// index set is eventually periodic with period the lcm of the
    /// sub-ray steps, so a bounded scan decides it.
    fn covers_ray(&self, ray: &Ray) -> bool {
        let mut horizon = BigInt::zero();
        let mut period = BigInt::one();
        let bump = |j: BigInt, horizon: &mut BigInt| {
            if j >= *horizon {
                *horizon = j + 1;
            }
        };
        for p in &self.points {
            if let Some(j) = ray.index_of(p) {
                bump(j, &mut horizon);
            }
        }
        for r in &self.rays {
            let meet = ray.intersect(r);
            for p in &meet.points {
                if let Some(j) = ray.index_of(p) {
                    bump(j, &mut horizon);
                }
            }
            for sub in &meet.rays {
                let j0 = ray.index_of(&sub.start).expect("sub-ray starts on the ray");
                let m = (&sub.step / &ray.step).numer().clone();
                bump(j0, &mut horizon);
                period = period.lcm(&m);
            }
        }
        let end = (horizon + period).to_u64().expect("ray scan bound fits in u64");
        (0..end).all(|j| self.contains(&ray.point(&BigInt::from(j))))
    }

    fn normalized(mut self) -> QSet {
        let mut rays: Vec<Ray> = Vec::new();
        self.rays.sort();
        self.rays.dedup();
        for (i, r) in self.rays.iter().enumerate() {
            let redundant =
                self.rays.iter().enumerate().any(|(k, o)| k != i && r.is_subray_of(o) && (!o.is_subray_of(r) || k < i));
            if !redundant {
                rays.push(r.clone());
            }
        }
        self.points.retain(|p| !rays.iter().any(|r| r.contains(p)));
        self.rays = rays;
        self
    }
}

impl PartialEq for QSet {
    fn eq(&self, other: &QSet) -> bool {
        self.same_set(other)
    }
}
