//! Exact spectra of Cayley sum graphs from character sums.
//!
//! For `A` the adjacency operator, `A χ = S(χ) χ̄`. A real character is an
//! eigenvector with eigenvalue `S(χ)`; a non-real pair `{χ, χ̄}` spans a
//! 2-dimensional invariant space with eigenvalues `±|S(χ)|`.

use std::fmt::Write as _;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::Serialize;

use crate::cayley::{build, loop_count, CayleySumGraph};
use crate::error::{Error, Result};
use crate::expsum::{table_for_set, SumTable};
use crate::ffield::{Elem, FiniteField};
use crate::sidon::{Family, GroupPoint, SumSet};

/// Largest dense problem handed to the eigensolver.
pub const MAX_DENSE_VERTICES: u64 = 4096;
/// Largest field for explicit eigenvector construction.
pub const MAX_DELOCALIZATION_Q: u32 = 64;
/// Grouping tolerance for equal eigenvalues, in units of `sqrt q`.
pub const GROUPING_TOLERANCE: f64 = 1e-7;

/// The additive character `(x, y) ↦ ψ(a x + b y)` of `k x k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Character {
    pub a: Elem,
    pub b: Elem,
}

impl Character {
    pub fn new(a: Elem, b: Elem) -> Self {
        Character { a, b }
    }

    pub fn eval(&self, field: &FiniteField, pt: GroupPoint) -> Complex64 {
        field.psi(field.add(field.mul(self.a, pt.u), field.mul(self.b, pt.v)))
    }

    /// `χ^2 = 1`, i.e. `2a = 2b = 0`.
    pub fn is_real(&self, field: &FiniteField) -> bool {
        field.p() == 2 || (self.a.is_zero() && self.b.is_zero())
    }

    pub fn conj(&self, field: &FiniteField) -> Character {
        Character::new(field.neg(self.a), field.neg(self.b))
    }

    /// Canonical pair representative: encoding below that of the conjugate.
    pub fn is_representative(&self, field: &FiniteField) -> bool {
        let q = field.q();
        let c = GroupPoint::new(self.a, self.b);
        let cbar = GroupPoint::new(field.neg(self.a), field.neg(self.b));
        c.encode(q) < cbar.encode(q)
    }
}

/// A multiset of real eigenvalues with multiplicities, sorted ascending.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralMeasure {
    pub family: String,
    pub q: u32,
    pub set_size: usize,
    pub loops: u64,
    /// The trivial eigenvalue `|S|` in the current scale.
    pub trivial: f64,
    pub trivial_removed: bool,
    /// Every eigenvalue has been divided by this.
    pub scale: f64,
    pub values: Vec<(f64, u64)>,
}

/// Accumulate with Neumaier compensation.
pub fn neumaier_sum(xs: impl IntoIterator<Item = f64>) -> f64 {
    let (mut s, mut c) = (0.0f64, 0.0f64);
    for x in xs {
        let t = s + x;
        if s.abs() >= x.abs() {
            c += (s - t) + x;
        } else {
            c += (x - t) + s;
        }
        s = t;
    }
    s + c
}

/// Sort and merge values closer than `tol` into one atom at the group mean.
fn group_values(mut raw: Vec<f64>, tol: f64) -> Vec<(f64, u64)> {
    raw.sort_by(f64::total_cmp);
    let mut out = Vec::new();
    let mut i = 0;
    while i < raw.len() {
        let mut j = i + 1;
        while j < raw.len() && raw[j] - raw[j - 1] < tol {
            j += 1;
        }
        let mean = neumaier_sum(raw[i..j].iter().copied()) / (j - i) as f64;
        out.push((mean, (j - i) as u64));
        i = j;
    }
    out
}

impl SpectralMeasure {
    /// Total multiplicity.
    pub fn mass(&self) -> u64 {
        self.values.iter().map(|&(_, m)| m).sum()
    }

    pub fn distinct_count(&self) -> usize {
        self.values.len()
    }

    /// `Σ λ^r · mult`, compensated.
    pub fn power_sum(&self, r: i32) -> f64 {
        neumaier_sum(self.values.iter().map(|&(x, m)| x.powi(r) * m as f64))
    }

    /// Eigenvalues with repetition, ascending.
    pub fn expanded(&self) -> Vec<f64> {
        self.values
            .iter()
            .flat_map(|&(x, m)| std::iter::repeat_n(x, m as usize))
            .collect()
    }

    /// Multiplicity of the atom within `tol` of `x`.
    pub fn multiplicity_near(&self, x: f64, tol: f64) -> u64 {
        self.values
            .iter()
            .filter(|(v, _)| (v - x).abs() <= tol)
            .map(|&(_, m)| m)
            .sum()
    }

    /// Largest `|λ|` with one copy of the trivial eigenvalue set aside.
    pub fn max_nontrivial_abs(&self) -> f64 {
        let mut values = self.values.clone();
        if !self.trivial_removed {
            remove_one_copy(&mut values, self.trivial);
        }
        values.iter().map(|(x, _)| x.abs()).fold(0.0, f64::max)
    }

    /// Σλ = loops and Σλ² = q²|S| (raw scale with trivial present only).
    pub fn check_trace_identities(&self) -> Result<()> {
        if self.trivial_removed || self.scale != 1.0 {
            return Err(Error::BadParameter("trace identities need the raw spectrum".into()));
        }
        let n = u64::from(self.q) * u64::from(self.q);
        if self.mass() != n {
            return Err(Error::CheckFailed(format!("mass {} != {n}", self.mass())));
        }
        let s1 = self.power_sum(1);
        if s1.round() as i64 != self.loops as i64 || (s1 - self.loops as f64).abs() > 1e-6 * n as f64 {
            return Err(Error::CheckFailed(format!("trace {s1} != loops {}", self.loops)));
        }
        let expect = n as f64 * self.set_size as f64;
        let s2 = self.power_sum(2);
        if (s2 - expect).abs() > 1e-6 * expect.max(1.0) {
            return Err(Error::CheckFailed(format!("Σλ² = {s2}, expected {expect}")));
        }
        Ok(())
    }

    /// CSV `eigenvalue,multiplicity` (or `normalized,...` once scaled).
    pub fn to_csv(&self) -> String {
        let header = if self.scale == 1.0 { "eigenvalue" } else { "normalized" };
        let mut out = format!("{header},multiplicity\n");
        for &(x, m) in &self.values {
            let _ = writeln!(out, "{x:.12},{m}");
        }
        out
    }

    pub fn metadata_json(&self) -> serde_json::Value {
        serde_json::json!({
            "family": self.family,
            "q": self.q,
            "set_size": self.set_size,
            "loops": self.loops,
            "trivial": self.trivial,
            "trivial_removed": self.trivial_removed,
            "scale": self.scale,
            "distinct": self.values.len(),
        })
    }
}

fn remove_one_copy(values: &mut Vec<(f64, u64)>, x: f64) {
    let Some(idx) = values
        .iter()
        .enumerate()
        .min_by(|a, b| (a.1 .0 - x).abs().total_cmp(&(b.1 .0 - x).abs()))
        .map(|(i, _)| i)
    else {
        return;
    };
    values[idx].1 -= 1;
    if values[idx].1 == 0 {
        values.remove(idx);
    }
}

/// Eigenvalues from a table of `S(a, b)`.
pub fn spectrum_from_table(set: &SumSet, table: &SumTable) -> Result<SpectralMeasure> {
    let field = set.field();
    let q = field.q();
    let n = u64::from(q) * u64::from(q);
    if n > 1 << 22 {
        return Err(Error::SizeExceeded(format!("spectrum with {n} eigenvalues")));
    }
    let mut raw = Vec::with_capacity(n as usize);
    for a in field.elements() {
        for b in field.elements() {
            let chi = Character::new(a, b);
            if chi.is_real(field) {
                raw.push(table.get(a, b).re);
            } else if chi.is_representative(field) {
                let r = table.get(a, b).norm();
                raw.push(r);
                raw.push(-r);
            }
        }
    }
    let tol = GROUPING_TOLERANCE * f64::from(q).sqrt();
    Ok(SpectralMeasure {
        family: set.family().name(),
        q,
        set_size: set.len(),
        loops: loop_count(&build(set)),
        trivial: set.len() as f64,
        trivial_removed: false,
        scale: 1.0,
        values: group_values(raw, tol),
    })
}

/// Spectrum of `Γ(k x k, S)` by the character route.
pub fn spectrum_from_characters(set: &SumSet) -> Result<SpectralMeasure> {
    let n = u64::from(set.field().q()).pow(2);
    if n > 1 << 22 {
        return Err(Error::SizeExceeded(format!("spectrum with {n} eigenvalues")));
    }
    spectrum_from_table(set, &table_for_set(set)?)
}

/// Eigenvalues of a dense symmetric matrix given in row-major order.
pub fn dense_eigenvalues(n: usize, entries: Vec<f64>) -> Vec<f64> {
    let m = DMatrix::from_row_slice(n, n, &entries);
    let mut ev: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Numerical eigenvalues of the materialized adjacency matrix, sorted.
pub fn spectrum_dense_oracle(graph: &CayleySumGraph) -> Result<Vec<f64>> {
    let a = graph.dense_adjacency(MAX_DENSE_VERTICES)?;
    Ok(dense_eigenvalues(graph.n() as usize, a))
}

/// Divide by `sqrt |S|`, optionally dropping one copy of the trivial value.
pub fn normalized_spectrum(measure: &SpectralMeasure, exclude_trivial: bool) -> Result<SpectralMeasure> {
    if measure.set_size == 0 {
        return Err(Error::EmptySet);
    }
    let c = (measure.set_size as f64).sqrt() / measure.scale;
    let mut values: Vec<(f64, u64)> = measure.values.iter().map(|&(x, m)| (x / c, m)).collect();
    let trivial = measure.trivial / c;
    let removed = measure.trivial_removed || exclude_trivial;
    if exclude_trivial && !measure.trivial_removed {
        remove_one_copy(&mut values, trivial);
    }
    Ok(SpectralMeasure {
        trivial,
        trivial_removed: removed,
        scale: measure.scale * c,
        values,
        ..measure.clone()
    })
}

/// Multiplicities of `±|K(m,1)|` for one product class `m = ab`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClassMultiplicity {
    pub m: u32,
    pub value: f64,
    pub plus: u64,
    pub minus: u64,
}

impl ClassMultiplicity {
    pub fn combined(&self) -> u64 {
        if self.value == 0.0 {
            self.plus
        } else {
            self.plus + self.minus
        }
    }
}

/// For each `m ∈ k^×`, the multiplicity of `±|K(m,1)|` (in the measure's
/// scale), plus the axis class `m = 0` with `|K| = 1`.
///
/// Each signed value must occur at least `(q-1)/2` times and each class at
/// least `q-1` times; a shortfall is reported as `CheckFailed`.
pub fn multiplicity_by_product_class(
    measure: &SpectralMeasure,
    table: &SumTable,
) -> Result<Vec<ClassMultiplicity>> {
    if measure.family != Family::Kloosterman.name() {
        return Err(Error::WrongFamily(format!("{} is not the Kloosterman family", measure.family)));
    }
    let field = table.field();
    if field.p() == 2 {
        return Err(Error::WrongFamily("product classes need odd q".into()));
    }
    let q = field.q();
    let tol = GROUPING_TOLERANCE * f64::from(q).sqrt();
    let need = u64::from(q - 1) / 2;
    let mut report = Vec::new();
    for m in std::iter::once(Elem::ZERO).chain(field.units()) {
        let k = if m.is_zero() { 1.0 } else { table.get(m, Elem::ONE).re.abs() };
        let value = k / measure.scale;
        let row = ClassMultiplicity {
            m: m.0,
            value,
            plus: measure.multiplicity_near(value, tol),
            minus: measure.multiplicity_near(-value, tol),
        };
        if row.plus < need || row.minus < need || row.combined() < 2 * need {
            return Err(Error::CheckFailed(format!(
                "class m = {} has multiplicities +{} / -{}",
                m.0, row.plus, row.minus
            )));
        }
        report.push(row);
    }
    Ok(report)
}

/// Summary of the explicit eigenbasis built from characters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DelocalizationReport {
    pub vectors: usize,
    pub max_sup_norm: f64,
    pub bound: f64,
    /// Largest `‖A v - λ v‖_∞` over the vectors that were re-verified.
    pub max_residual: f64,
}

/// Build the real orthonormal eigenbasis from characters and report its
/// largest sup-norm; fails if it exceeds `sqrt(2/n)`.
///
/// For a pair with `S(χ) = r e^{iθ}` the vectors are `√2 Re(e^{-iθ/2} χ)`
/// and `√2 Im(e^{-iθ/2} χ)` (scaled by `1/√n`), with eigenvalues `±r`.
pub fn delocalization_check(set: &SumSet) -> Result<DelocalizationReport> {
    let field = set.field();
    let q = field.q();
    if q > MAX_DELOCALIZATION_Q {
        return Err(Error::SizeExceeded(format!("delocalization check limited to q <= {MAX_DELOCALIZATION_Q}")));
    }
    let graph = build(set);
    let n = graph.n() as usize;
    let inv_sqrt_n = 1.0 / (n as f64).sqrt();
    let points: Vec<GroupPoint> = (0..n as u64).map(|x| graph.vertex(x)).collect();
    let mut max_sup: f64 = 0.0;
    let mut max_res: f64 = 0.0;
    let mut count = 0;
    // re-verify A v = λ v on this many vectors; the rest only get norms
    let verify_budget = 64;

    let mut consider = |v: Vec<f64>, lambda: f64, count: &mut usize| {
        let norm2: f64 = v.iter().map(|x| x * x).sum();
        debug_assert!((norm2 - 1.0).abs() < 1e-9);
        max_sup = max_sup.max(v.iter().fold(0.0f64, |m, x| m.max(x.abs())));
        if *count < verify_budget {
            for x in 0..n {
                let av: f64 = graph.neighbor_codes(x as u64).map(|y| v[y as usize]).sum();
                max_res = max_res.max((av - lambda * v[x]).abs());
            }
        }
        *count += 1;
    };

    for a in field.elements() {
        for b in field.elements() {
            let chi = Character::new(a, b);
            let s: Complex64 = crate::expsum::set_character_sum(set, a, b);
            if chi.is_real(field) {
                let v = points.iter().map(|&pt| chi.eval(field, pt).re * inv_sqrt_n).collect();
                consider(v, s.re, &mut count);
            } else if chi.is_representative(field) {
                let (r, theta) = s.to_polar();
                let rot = Complex64::from_polar(1.0, -theta / 2.0);
                let w: Vec<Complex64> = points
                    .iter()
                    .map(|&pt| rot * chi.eval(field, pt) * (2f64.sqrt() * inv_sqrt_n))
                    .collect();
                consider(w.iter().map(|z| z.re).collect(), r, &mut count);
                consider(w.iter().map(|z| z.im).collect(), -r, &mut count);
            }
        }
    }
    let bound = 2f64.sqrt() * inv_sqrt_n;
    let report = DelocalizationReport {
        vectors: count,
        max_sup_norm: max_sup,
        bound,
        max_residual: max_res,
    };
    if max_sup > bound + 1e-9 || max_res > 1e-9 * q as f64 {
        return Err(Error::CheckFailed(format!("delocalization: {report:?}")));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::make_field;
    use crate::sidon::{make_b, make_k, make_kplus, make_kt};

    #[test]
    fn kloosterman_f3_worked_spectrum() {
        let f = make_field(3, 1).unwrap();
        let m = spectrum_from_characters(&make_k(&f)).unwrap();
        let expect = [(-2.0, 1), (-1.0, 3), (1.0, 3), (2.0, 2)];
        assert_eq!(m.values.len(), 4);
        for (got, want) in m.values.iter().zip(expect) {
            assert!((got.0 - want.0).abs() < 1e-9 && got.1 == want.1);
        }
        m.check_trace_identities().unwrap();
        let norm = normalized_spectrum(&m, true).unwrap();
        assert_eq!(norm.mass(), 8);
    }

    #[test]
    fn oracle_agrees_on_small_fields() {
        for (p, n) in [(3, 1), (2, 2), (5, 1), (2, 3), (7, 1)] {
            let f = make_field(p, n).unwrap();
            for set in [make_k(&f), make_b(&f)] {
                let m = spectrum_from_characters(&set).unwrap();
                m.check_trace_identities().unwrap();
                let oracle = spectrum_dense_oracle(&build(&set)).unwrap();
                for (x, y) in m.expanded().iter().zip(&oracle) {
                    assert!((x - y).abs() < 1e-6, "{p}^{n}: {x} vs {y}");
                }
            }
        }
    }

    #[test]
    fn degenerate_sets() {
        let f = make_field(3, 1).unwrap();
        let empty = SumSet::custom(f.clone(), []);
        let ev = spectrum_dense_oracle(&build(&empty)).unwrap();
        assert!(ev.iter().all(|x| x.abs() < 1e-12));
        assert_eq!(normalized_spectrum(&spectrum_from_characters(&empty).unwrap(), true), Err(Error::EmptySet));
        let all = SumSet::custom(f.clone(), (0..9).map(|c| GroupPoint::decode(c, 3)));
        let m = spectrum_from_characters(&all).unwrap();
        assert_eq!(m.values.len(), 2);
        assert!((m.values[1].0 - 9.0).abs() < 1e-9 && m.values[1].1 == 1);
    }

    #[test]
    fn class_multiplicities_f5() {
        let f = make_field(5, 1).unwrap();
        let set = make_k(&f);
        let table = crate::expsum::kloosterman_table(&f).unwrap();
        let m = normalized_spectrum(&spectrum_from_table(&set, &table).unwrap(), true).unwrap();
        let rep = multiplicity_by_product_class(&m, &table).unwrap();
        assert_eq!(rep.len(), 5);
        assert!(rep.iter().all(|r| r.combined() >= 4));
        let axis = rep[0];
        assert!(axis.plus >= 4 && axis.minus >= 4);
        let b = spectrum_from_characters(&make_b(&f)).unwrap();
        assert!(matches!(multiplicity_by_product_class(&b, &table), Err(Error::WrongFamily(_))));
    }

    #[test]
    fn delocalization_small() {
        let f = make_field(5, 1).unwrap();
        let rep = delocalization_check(&make_k(&f)).unwrap();
        assert_eq!(rep.vectors, 25);
        assert!(rep.max_sup_norm <= rep.bound + 1e-12);
        let f4 = make_field(2, 2).unwrap();
        let rep = delocalization_check(&make_b(&f4)).unwrap();
        // all characters real in characteristic 2
        assert!((rep.max_sup_norm - 0.25).abs() < 1e-12);
        let f7 = make_field(7, 1).unwrap();
        delocalization_check(&make_kt(&f7, 0.5).unwrap()).unwrap();
        delocalization_check(&make_kplus(&f7).unwrap()).unwrap();
    }
}
