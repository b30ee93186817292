//! Kloosterman, Birch and Salié sums, partial Kloosterman sums, and batch
//! tables of character sums over a connection set.
//!
//! Naive evaluators are the literal definitions. Tables for prime fields
//! are filled by exact-length DFTs (rustfft handles prime lengths); the
//! extension-field fallback is naive. Every table spot-checks itself
//! against the naive route when it is built.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::ffield::{Elem, FiniteField};
use crate::sidon::{partial_range_len, Family, SumSet};

/// Spot checks run automatically on every table construction.
const BUILD_SPOT_CHECKS: usize = 8;
/// Relative tolerance (times `sqrt q`) for table vs naive comparisons.
pub const TABLE_TOLERANCE: f64 = 1e-8;

/// `K(a, b; k) = Σ_{x ≠ 0} ψ(a x + b / x)`.
pub fn kloosterman(a: Elem, b: Elem, field: &FiniteField) -> Complex64 {
    field
        .units()
        .map(|x| {
            let xi = field.inv(x).expect("unit");
            field.psi(field.add(field.mul(a, x), field.mul(b, xi)))
        })
        .sum()
}

/// `B(a, b; k) = Σ_x ψ(a x + b x^3)`.
pub fn birch(a: Elem, b: Elem, field: &FiniteField) -> Complex64 {
    field
        .elements()
        .map(|x| {
            let x3 = field.mul(field.mul(x, x), x);
            field.psi(field.add(field.mul(a, x), field.mul(b, x3)))
        })
        .sum()
}

/// Salié sum `T(a, b; p) = Σ_{x ≠ 0} (x/p) ψ(a x + b / x)`.
pub fn salie(a: Elem, b: Elem, field: &FiniteField) -> Result<Complex64> {
    if !field.is_prime_field() {
        return Err(Error::NotPrimeField);
    }
    Ok(field
        .units()
        .map(|x| {
            let xi = field.inv(x).expect("unit");
            let w = f64::from(field.quadratic_character(x));
            field.psi(field.add(field.mul(a, x), field.mul(b, xi))) * w
        })
        .sum())
}

/// Closed-form evaluation of `T(a, b; p)` for `p ≡ 3 (mod 4)`.
///
/// For `ab` a nonresidue the sum vanishes; for `ab = y^2 ≠ 0` it is
/// `2i sqrt(p) (b/p) cos(4π y / p)`. On the axes the sum is a quadratic
/// Gauss sum: `T(a, 0) = (a/p) i sqrt(p)` and `T(0, b) = (b/p) i sqrt(p)`.
pub fn salie_closed_form(a: Elem, b: Elem, field: &FiniteField) -> Result<Complex64> {
    if !field.is_prime_field() {
        return Err(Error::NotPrimeField);
    }
    let p = field.p();
    if p % 4 != 3 {
        return Err(Error::BadCongruence(format!("{p} is not 3 mod 4")));
    }
    let sp = f64::from(p).sqrt();
    let i = Complex64::i();
    match (a.is_zero(), b.is_zero()) {
        (true, true) => Err(Error::BadParameter("closed form needs (a,b) != (0,0)".into())),
        (false, true) => Ok(i * sp * f64::from(field.quadratic_character(a))),
        (true, false) => Ok(i * sp * f64::from(field.quadratic_character(b))),
        (false, false) => {
            let ab = field.mul(a, b);
            if field.quadratic_character(ab) < 0 {
                return Ok(Complex64::new(0.0, 0.0));
            }
            // p ≡ 3 mod 4: a square root is ab^((p+1)/4)
            let y = field.pow(ab, u64::from((p + 1) / 4));
            let c = (4.0 * PI * f64::from(y.0) / f64::from(p)).cos();
            Ok(i * (2.0 * sp * f64::from(field.quadratic_character(b)) * c))
        }
    }
}

/// `Σ_{1 ≤ x ≤ floor(t(p-1))} ψ(a x + b / x)`.
pub fn partial_kloosterman(a: Elem, b: Elem, field: &FiniteField, t: f64) -> Result<Complex64> {
    if !field.is_prime_field() {
        return Err(Error::NotPrimeField);
    }
    let len = partial_range_len(field.p(), t)?;
    Ok((1..=len)
        .map(|x| {
            let x = Elem(x);
            let xi = field.inv(x).expect("unit");
            field.psi(field.add(field.mul(a, x), field.mul(b, xi)))
        })
        .sum())
}

/// `S(a, b) = Σ_{(u,v) ∈ S} ψ(a u + b v)`, the value of the character
/// `χ_{a,b}` summed over the set.
pub fn set_character_sum(set: &SumSet, a: Elem, b: Elem) -> Complex64 {
    let f = set.field();
    set.points()
        .iter()
        .map(|pt| f.psi(f.add(f.mul(a, pt.u), f.mul(b, pt.v))))
        .sum()
}

/// Which sum a [`SumTable`] holds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SumKind {
    Kloosterman,
    Birch,
    /// Character sums `S(a, b)` of an arbitrary connection set.
    SetSum(Family),
}

#[derive(Debug, Clone)]
enum Storage {
    /// `K(m, 1)` for `m = 0..q`; entry 0 unused.
    Kloosterman(Vec<f64>),
    /// `B(a, g^r)` for each class `r < d`, indexed by `a`.
    Birch { d: u32, rows: Vec<Vec<f64>> },
    /// Full `q x q` table, row `a`, column `b`.
    Dense(Vec<Complex64>),
}

/// All values of a sum over `(a, b) ∈ k x k`, stored in reduced form
/// where a symmetry allows it.
#[derive(Debug, Clone)]
pub struct SumTable {
    field: FiniteField,
    kind: SumKind,
    storage: Storage,
    set: Option<SumSet>,
}

fn inverse_dft(data: &mut [Complex64]) {
    let mut planner = FftPlanner::<f64>::new();
    planner.plan_fft_inverse(data.len()).process(data);
}

/// Kloosterman table via `K(a, b) = K(ab, 1)`.
pub fn kloosterman_table(field: &FiniteField) -> Result<SumTable> {
    let q = field.q() as usize;
    let mut column = vec![0.0; q];
    if field.is_prime_field() {
        // K(m,1) = Σ_x f(x) e(m x / p) with f(x) = e(x^{-1}/p), f(0) = 0
        let mut buf: Vec<Complex64> = (0..q)
            .map(|x| match field.inv(Elem(x as u32)) {
                Ok(xi) => field.psi(xi),
                Err(_) => Complex64::new(0.0, 0.0),
            })
            .collect();
        inverse_dft(&mut buf);
        for m in 1..q {
            column[m] = buf[m].re;
        }
    } else {
        for m in field.units() {
            column[m.index()] = kloosterman(m, Elem::ONE, field).re;
        }
    }
    let table = SumTable {
        field: field.clone(),
        kind: SumKind::Kloosterman,
        storage: Storage::Kloosterman(column),
        set: None,
    };
    table.verify_on_build()?;
    Ok(table)
}

/// Number of classes of `k^×` modulo cubes.
fn cube_classes(field: &FiniteField) -> u32 {
    if (field.q() - 1) % 3 == 0 {
        3
    } else {
        1
    }
}

/// Birch table via `B(a, b α^3) = B(a α, b)` with class representatives
/// `b = g^r`, `r < gcd(3, q - 1)`.
pub fn birch_table(field: &FiniteField) -> Result<SumTable> {
    let q = field.q() as usize;
    let d = cube_classes(field);
    let mut rows = Vec::with_capacity(d as usize);
    for r in 0..d {
        let beta = field.exp(u64::from(r));
        let row: Vec<f64> = if field.is_prime_field() {
            let mut buf: Vec<Complex64> = (0..q)
                .map(|x| {
                    let x = Elem(x as u32);
                    field.psi(field.mul(beta, field.mul(field.mul(x, x), x)))
                })
                .collect();
            inverse_dft(&mut buf);
            buf.iter().map(|z| z.re).collect()
        } else {
            field.elements().map(|a| birch(a, beta, field).re).collect()
        };
        rows.push(row);
    }
    let table = SumTable {
        field: field.clone(),
        kind: SumKind::Birch,
        storage: Storage::Birch { d, rows },
        set: None,
    };
    table.verify_on_build()?;
    Ok(table)
}

/// Table of `S(a, b)` for an arbitrary connection set.
///
/// Prime fields use one length-`p` transform per `b` of
/// `h_b(u) = Σ_{(u,v) ∈ S} e(b v / p)`; extension fields sum directly.
pub fn character_table(set: &SumSet) -> Result<SumTable> {
    let field = set.field();
    let q = field.q() as usize;
    if (q as u64) * (q as u64) > 1 << 22 {
        return Err(Error::SizeExceeded(format!("character table for q = {q}")));
    }
    let mut values = vec![Complex64::new(0.0, 0.0); q * q];
    if field.is_prime_field() {
        let mut planner = FftPlanner::<f64>::new();
        let fft = planner.plan_fft_inverse(q);
        let mut buf = vec![Complex64::new(0.0, 0.0); q];
        for b in 0..q {
            buf.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
            let be = Elem(b as u32);
            for pt in set.points() {
                buf[pt.u.index()] += field.psi(field.mul(be, pt.v));
            }
            fft.process(&mut buf);
            for a in 0..q {
                values[a * q + b] = buf[a];
            }
        }
    } else {
        for a in field.elements() {
            for b in field.elements() {
                values[a.index() * q + b.index()] = set_character_sum(set, a, b);
            }
        }
    }
    let table = SumTable {
        field: field.clone(),
        kind: SumKind::SetSum(set.family()),
        storage: Storage::Dense(values),
        set: Some(set.clone()),
    };
    table.verify_on_build()?;
    Ok(table)
}

/// Character-sum table for a connection set, using the reduced Kloosterman
/// or Birch table when the set is one of those families.
pub fn table_for_set(set: &SumSet) -> Result<SumTable> {
    match set.family() {
        Family::Kloosterman => kloosterman_table(set.field()),
        Family::Birch => birch_table(set.field()),
        _ => character_table(set),
    }
}

impl SumTable {
    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn kind(&self) -> SumKind {
        self.kind
    }

    /// Value at `(a, b)`.
    pub fn get(&self, a: Elem, b: Elem) -> Complex64 {
        let f = &self.field;
        match &self.storage {
            Storage::Kloosterman(col) => {
                let v = match (a.is_zero(), b.is_zero()) {
                    (true, true) => f64::from(f.q() - 1),
                    (true, false) | (false, true) => -1.0,
                    (false, false) => col[f.mul(a, b).index()],
                };
                Complex64::new(v, 0.0)
            }
            Storage::Birch { d, rows } => {
                let v = if b.is_zero() {
                    if a.is_zero() {
                        f64::from(f.q())
                    } else {
                        0.0
                    }
                } else {
                    let order = u64::from(f.q() - 1);
                    let k = u64::from(f.log(b).expect("nonzero"));
                    let r = k % u64::from(*d);
                    // b = g^r α^3 with α = g^j
                    let j = if *d == 3 {
                        (k - r) / 3
                    } else {
                        k * inverse_mod(3, order) % order
                    };
                    let alpha_inv = f.exp(order - j % order);
                    rows[r as usize][f.mul(a, alpha_inv).index()]
                };
                Complex64::new(v, 0.0)
            }
            Storage::Dense(values) => values[a.index() * f.q() as usize + b.index()],
        }
    }

    /// Naive value of the same quantity.
    pub fn naive(&self, a: Elem, b: Elem) -> Complex64 {
        match self.kind {
            SumKind::Kloosterman => kloosterman(a, b, &self.field),
            SumKind::Birch => birch(a, b, &self.field),
            SumKind::SetSum(_) => set_character_sum(self.set.as_ref().expect("set"), a, b),
        }
    }

    /// Largest deviation from naive evaluation over `count` random indices.
    pub fn spot_check(&self, count: usize, seed: u64) -> f64 {
        let q = self.field.q();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count)
            .map(|_| {
                let a = Elem(rng.random_range(0..q));
                let b = Elem(rng.random_range(0..q));
                (self.get(a, b) - self.naive(a, b)).norm()
            })
            .fold(0.0, f64::max)
    }

    fn verify_on_build(&self) -> Result<()> {
        let tol = TABLE_TOLERANCE * f64::from(self.field.q()).sqrt();
        let dev = self.spot_check(BUILD_SPOT_CHECKS, 0x5eed);
        if dev > tol {
            return Err(Error::CheckFailed(format!(
                "table deviates from naive evaluation by {dev:e}"
            )));
        }
        Ok(())
    }

    /// Largest `|value|` over `(a, b) ≠ (0, 0)`.
    pub fn max_nontrivial_abs(&self) -> f64 {
        let f = &self.field;
        let mut best: f64 = 0.0;
        for a in f.elements() {
            for b in f.elements() {
                if !(a.is_zero() && b.is_zero()) {
                    best = best.max(self.get(a, b).norm());
                }
            }
        }
        best
    }

    /// The reduced column `m ↦ K(m, 1)` as CSV `m,re,im`.
    pub fn reduced_csv(&self) -> Result<String> {
        let Storage::Kloosterman(col) = &self.storage else {
            return Err(Error::WrongFamily("reduced column exists only for Kloosterman tables".into()));
        };
        let mut out = String::from("m,re,im\n");
        for (m, v) in col.iter().enumerate().skip(1) {
            let _ = writeln!(out, "{m},{v:.12},0");
        }
        Ok(out)
    }

    /// Full table as CSV `a,b,re,im`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("a,b,re,im\n");
        for a in self.field.elements() {
            for b in self.field.elements() {
                let z = self.get(a, b);
                let _ = writeln!(out, "{},{},{:.12},{:.12}", a.0, b.0, z.re, z.im);
            }
        }
        out
    }
}

fn inverse_mod(x: u64, m: u64) -> u64 {
    // m is small; a linear search keeps this obvious
    (1..m).find(|&y| x * y % m == 1).unwrap_or(1)
}
