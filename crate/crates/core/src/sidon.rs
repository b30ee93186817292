//! Connection sets in `k x k` and exhaustive Sidon-type verification.
//!
//! The four families built here are the hyperbola `xy = 1`, the cubic
//! `y = x^3`, the partial hyperbola with `1 <= x <= t(p-1)`, and the
//! quadratic-residue half of the hyperbola.

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::ffield::{Elem, FieldDescriptor, FiniteField};

/// Largest set accepted by the Sidon scans.
pub const MAX_SIDON_SCAN: usize = 4096;

/// An element `(u, v)` of the additive group `k x k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupPoint {
    pub u: Elem,
    pub v: Elem,
}

impl GroupPoint {
    pub const ZERO: GroupPoint = GroupPoint {
        u: Elem::ZERO,
        v: Elem::ZERO,
    };

    pub fn new(u: Elem, v: Elem) -> Self {
        GroupPoint { u, v }
    }

    /// Integer code `u * q + v`; also the vertex index in Cayley graphs.
    #[inline]
    pub fn encode(self, q: u32) -> u64 {
        u64::from(self.u.0) * u64::from(q) + u64::from(self.v.0)
    }

    #[inline]
    pub fn decode(code: u64, q: u32) -> Self {
        GroupPoint {
            u: Elem((code / u64::from(q)) as u32),
            v: Elem((code % u64::from(q)) as u32),
        }
    }

    #[inline]
    pub fn add(self, other: GroupPoint, f: &FiniteField) -> GroupPoint {
        GroupPoint {
            u: f.add(self.u, other.u),
            v: f.add(self.v, other.v),
        }
    }

    #[inline]
    pub fn sub(self, other: GroupPoint, f: &FiniteField) -> GroupPoint {
        GroupPoint {
            u: f.sub(self.u, other.u),
            v: f.sub(self.v, other.v),
        }
    }

    #[inline]
    pub fn neg(self, f: &FiniteField) -> GroupPoint {
        GroupPoint {
            u: f.neg(self.u),
            v: f.neg(self.v),
        }
    }
}

impl fmt::Display for GroupPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.u, self.v)
    }
}

/// Provenance tag of a connection set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    Kloosterman,
    Birch,
    PartialHyperbola(f64),
    QrHyperbola,
    Custom,
}

impl Family {
    pub fn name(&self) -> String {
        match self {
            Family::Kloosterman => "kloosterman".into(),
            Family::Birch => "birch".into(),
            Family::PartialHyperbola(t) => format!("kt({t})"),
            Family::QrHyperbola => "kplus".into(),
            Family::Custom => "custom".into(),
        }
    }
}

/// A connection set `S` in `k x k`.
#[derive(Debug, Clone)]
pub struct SumSet {
    field: FiniteField,
    points: Vec<GroupPoint>,
    members: HashSet<GroupPoint>,
    family: Family,
    center: Option<GroupPoint>,
}

impl SumSet {
    /// Build a set from arbitrary points; duplicates are dropped and the
    /// points are stored in canonical order.
    pub fn new(
        field: FiniteField,
        points: impl IntoIterator<Item = GroupPoint>,
        family: Family,
        center: Option<GroupPoint>,
    ) -> Self {
        let q = field.q();
        let mut points: Vec<GroupPoint> = points
            .into_iter()
            .filter(|pt| pt.u.0 < q && pt.v.0 < q)
            .collect();
        points.sort_unstable();
        points.dedup();
        let members = points.iter().copied().collect();
        SumSet {
            field,
            points,
            members,
            family,
            center,
        }
    }

    pub fn custom(field: FiniteField, points: impl IntoIterator<Item = GroupPoint>) -> Self {
        Self::new(field, points, Family::Custom, None)
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn points(&self) -> &[GroupPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn center(&self) -> Option<GroupPoint> {
        self.center
    }

    #[inline]
    pub fn contains(&self, pt: GroupPoint) -> bool {
        self.members.contains(&pt)
    }

    /// Points as integer pairs, for display and export.
    pub fn int_pairs(&self) -> Vec<[u32; 2]> {
        self.points.iter().map(|pt| [pt.u.0, pt.v.0]).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("sum sets always serialize")
    }
}

impl Serialize for SumSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("SumSet", 3)?;
        let desc: FieldDescriptor = self.field.descriptor();
        st.serialize_field("field", &desc)?;
        st.serialize_field("family", &self.family.name())?;
        st.serialize_field("points", &self.int_pairs())?;
        st.end()
    }
}

/// `K(k) = {(x, y) : xy = 1}`.
pub fn make_k(field: &FiniteField) -> SumSet {
    let pts = field
        .units()
        .map(|x| GroupPoint::new(x, field.inv(x).expect("unit")));
    SumSet::new(field.clone(), pts, Family::Kloosterman, Some(GroupPoint::ZERO))
}

/// `B(k) = {(x, y) : y = x^3}`.
pub fn make_b(field: &FiniteField) -> SumSet {
    let pts = field.elements().map(|x| GroupPoint::new(x, field.pow(x, 3)));
    SumSet::new(field.clone(), pts, Family::Birch, Some(GroupPoint::ZERO))
}

/// Number of integers `x` with `1 <= x <= t(p-1)`.
pub fn partial_range_len(p: u32, t: f64) -> Result<u32> {
    if !(t > 0.0 && t <= 1.0) {
        return Err(Error::BadParameter(format!("t = {t} is outside (0, 1]")));
    }
    // tiny slack so that e.g. 0.3 * 10 lands on 3 and not 2.999..
    Ok((t * f64::from(p - 1) + 1e-9).floor() as u32)
}

/// `K_t(p) = {(x, 1/x) : 1 <= x <= t(p-1)}` over the prime field `F_p`.
pub fn make_kt(field: &FiniteField, t: f64) -> Result<SumSet> {
    if !field.is_prime_field() {
        return Err(Error::NotPrimeField);
    }
    let len = partial_range_len(field.p(), t)?;
    let pts = (1..=len).map(|x| {
        let x = Elem(x);
        GroupPoint::new(x, field.inv(x).expect("unit"))
    });
    Ok(SumSet::new(
        field.clone(),
        pts,
        Family::PartialHyperbola(t),
        Some(GroupPoint::ZERO),
    ))
}

/// `K_+(p) = {(x, 1/x) : x a nonzero square}` for `p = 3 mod 4`.
pub fn make_kplus(field: &FiniteField) -> Result<SumSet> {
    if !field.is_prime_field() {
        return Err(Error::NotPrimeField);
    }
    if field.p() % 4 != 3 {
        return Err(Error::BadCongruence(format!(
            "p = {} is not 3 mod 4",
            field.p()
        )));
    }
    let pts = field
        .units()
        .filter(|&x| field.quadratic_character(x) == 1)
        .map(|x| GroupPoint::new(x, field.inv(x).expect("unit")));
    Ok(SumSet::new(field.clone(), pts, Family::QrHyperbola, None))
}

/// Outcome of a Sidon-type scan.
///
/// A violation is reported as `(alpha, beta, gamma, delta)` with
/// `alpha + beta = gamma + delta` and `alpha` not in `{gamma, delta}`.
/// For the symmetric variant a failure of `S = a0 - S` is reported through
/// `asymmetric_point` instead.
#[derive(Debug, Clone, PartialEq)]
pub struct SidonVerdict {
    pub holds: bool,
    pub witness: Option<[GroupPoint; 4]>,
    pub asymmetric_point: Option<GroupPoint>,
}

impl SidonVerdict {
    fn ok() -> Self {
        SidonVerdict {
            holds: true,
            witness: None,
            asymmetric_point: None,
        }
    }
}

/// Re-check a reported witness from the raw tuple.
pub fn witness_is_valid(field: &FiniteField, w: &[GroupPoint; 4], exempt: Option<GroupPoint>) -> bool {
    let [a, b, c, d] = *w;
    let lhs = a.add(b, field);
    lhs == c.add(d, field) && a != c && a != d && Some(lhs) != exempt
}

fn scan(set: &SumSet, exempt: Option<GroupPoint>) -> Result<SidonVerdict> {
    if set.len() > MAX_SIDON_SCAN {
        return Err(Error::SizeExceeded(format!(
            "Sidon scan limited to {MAX_SIDON_SCAN} points, got {}",
            set.len()
        )));
    }
    let f = &set.field;
    let pts = &set.points;
    // Every unordered pair {i <= j} in lexicographic order; the first sum
    // seen twice gives the witness.
    let mut seen: HashMap<GroupPoint, (usize, usize)> = HashMap::with_capacity(pts.len() * (pts.len() + 1) / 2);
    for i in 0..pts.len() {
        for j in i..pts.len() {
            let s = pts[i].add(pts[j], f);
            if Some(s) == exempt {
                continue;
            }
            if let Some(&(k, l)) = seen.get(&s) {
                return Ok(SidonVerdict {
                    holds: false,
                    witness: Some([pts[i], pts[j], pts[k], pts[l]]),
                    asymmetric_point: None,
                });
            }
            seen.insert(s, (i, j));
        }
    }
    Ok(SidonVerdict::ok())
}

/// Is every solution of `a + b = c + d` in `S` trivial?
pub fn is_sidon(set: &SumSet) -> Result<SidonVerdict> {
    scan(set, None)
}

/// Sidon up to relations `a + b = c + d = a0`.
pub fn is_partial_symmetric_sidon(set: &SumSet, a0: GroupPoint) -> Result<SidonVerdict> {
    scan(set, Some(a0))
}

/// Partial symmetric Sidon with center `a0`, and `S = a0 - S`.
pub fn is_symmetric_sidon(set: &SumSet, a0: GroupPoint) -> Result<SidonVerdict> {
    let partial = is_partial_symmetric_sidon(set, a0)?;
    if !partial.holds {
        return Ok(partial);
    }
    let f = &set.field;
    if let Some(&s) = set.points.iter().find(|&&s| !set.contains(a0.sub(s, f))) {
        return Ok(SidonVerdict {
            holds: false,
            witness: None,
            asymmetric_point: Some(s),
        });
    }
    Ok(SidonVerdict::ok())
}

/// `S ∩ T` for a predicate `T`, together with a certificate that no
/// retained point `s` has `-s` in `T`.
///
/// When the certificate holds and `S` is partial symmetric Sidon with
/// center 0, the restriction is Sidon.
pub fn restrict(set: &SumSet, pred: impl Fn(GroupPoint) -> bool) -> (SumSet, bool) {
    let f = &set.field;
    let kept: Vec<GroupPoint> = set.points.iter().copied().filter(|&s| pred(s)).collect();
    let certificate = kept.iter().all(|&s| !pred(s.neg(f)));
    (SumSet::custom(f.clone(), kept), certificate)
}
