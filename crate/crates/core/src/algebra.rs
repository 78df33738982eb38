//! Parity-graded, normal-ordered polynomials in a single boson mode with
//! 2×2 (qubit) matrix structure.
//!
//! A [`Monomial`] is `𝒫^p (a†)^i a^j`, where `𝒫 = e^{iπ a†a}` is kept as a
//! formal grading symbol obeying `𝒫² = 1`, `𝒫a = −a𝒫`, `𝒫a† = −a†𝒫`.
//! Products are brought back to this canonical order with
//!
//! ```text
//! a^j (a†)^k = Σ_s C(j,s) C(k,s) s! (a†)^{k−s} a^{j−s}
//! ```
//!
//! so equality of two polynomials is equality of their coefficient maps.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::scalar::Coefficient;

/// `𝒫^grading (a†)^creation a^annihilation`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub grading: u8,
    pub creation: u32,
    pub annihilation: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial::new(0, 0, 0);

    pub const fn new(grading: u8, creation: u32, annihilation: u32) -> Self {
        Monomial {
            grading: grading & 1,
            creation,
            annihilation,
        }
    }

    pub fn degree(&self) -> u32 {
        self.creation + self.annihilation
    }

    /// Normal-ordered expansion of `self · rhs` as `(monomial, integer weight)` pairs.
    pub fn product(&self, rhs: &Monomial) -> Vec<(Monomial, i64)> {
        // Moving 𝒫^q to the left through a†^i a^j picks up (−1)^{q(i+j)}.
        let sign: i64 = if rhs.grading == 1 && self.degree() % 2 == 1 {
            -1
        } else {
            1
        };
        let grading = (self.grading + rhs.grading) % 2;
        let j = self.annihilation;
        let k = rhs.creation;
        (0..=j.min(k))
            .map(|s| {
                let weight = sign * reorder_weight(j, k, s);
                let mono = Monomial::new(grading, self.creation + k - s, j - s + rhs.annihilation);
                (mono, weight)
            })
            .collect()
    }

    /// `(𝒫^p a†^i a^j)† = a†^j a^i 𝒫^p = (−1)^{p(i+j)} 𝒫^p a†^j a^i`.
    pub fn adjoint(&self) -> (Monomial, i64) {
        let sign = if self.grading == 1 && self.degree() % 2 == 1 {
            -1
        } else {
            1
        };
        (
            Monomial::new(self.grading, self.annihilation, self.creation),
            sign,
        )
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.grading == 1 {
            parts.push("P".to_string());
        }
        match self.creation {
            0 => {}
            1 => parts.push("a†".to_string()),
            n => parts.push(format!("a†^{n}")),
        }
        match self.annihilation {
            0 => {}
            1 => parts.push("a".to_string()),
            n => parts.push(format!("a^{n}")),
        }
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join(" "))
        }
    }
}

/// C(j,s) C(k,s) s!
fn reorder_weight(j: u32, k: u32, s: u32) -> i64 {
    let w = binomial(j, s)
        .checked_mul(binomial(k, s))
        .and_then(|w| w.checked_mul(factorial(s)))
        .expect("normal-ordering weight overflows i64");
    i64::try_from(w).expect("normal-ordering weight overflows i64")
}

fn binomial(n: u32, k: u32) -> u128 {
    let k = k.min(n - k) as u128;
    let n = n as u128;
    (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}

fn factorial(n: u32) -> u128 {
    (1..=n as u128).product()
}

/// Position of a term inside the 2×2 operator matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Entry {
    pub row: usize,
    pub col: usize,
}

impl Entry {
    pub const ALL: [Entry; 4] = [
        Entry { row: 0, col: 0 },
        Entry { row: 0, col: 1 },
        Entry { row: 1, col: 0 },
        Entry { row: 1, col: 1 },
    ];

    pub fn index(&self) -> usize {
        self.row * 2 + self.col
    }
}

/// A 2×2 matrix whose entries are normal-ordered graded boson polynomials.
///
/// Zero coefficients are never stored.
#[derive(Clone, PartialEq)]
pub struct OperatorPolynomial<C> {
    entries: [BTreeMap<Monomial, C>; 4],
}

impl<C: Coefficient> Default for OperatorPolynomial<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Coefficient> OperatorPolynomial<C> {
    pub fn zero() -> Self {
        OperatorPolynomial {
            entries: Default::default(),
        }
    }

    /// `coeff · mono` placed at `(row, col)`.
    pub fn term(row: usize, col: usize, mono: Monomial, coeff: C) -> Self {
        let mut p = Self::zero();
        p.add_term(row, col, mono, coeff);
        p
    }

    /// `coeff · mono` times the 2×2 identity.
    pub fn diagonal(mono: Monomial, coeff: C) -> Self {
        let mut p = Self::zero();
        p.add_term(0, 0, mono, coeff.clone());
        p.add_term(1, 1, mono, coeff);
        p
    }

    pub fn identity() -> Self {
        Self::diagonal(Monomial::ONE, C::one())
    }

    pub fn scalar(c: C) -> Self {
        Self::diagonal(Monomial::ONE, c)
    }

    pub fn creation() -> Self {
        Self::diagonal(Monomial::new(0, 1, 0), C::one())
    }

    pub fn annihilation() -> Self {
        Self::diagonal(Monomial::new(0, 0, 1), C::one())
    }

    pub fn number() -> Self {
        Self::diagonal(Monomial::new(0, 1, 1), C::one())
    }

    /// The boson parity `𝒫` (identity on the qubit).
    pub fn boson_parity() -> Self {
        Self::diagonal(Monomial::new(1, 0, 0), C::one())
    }

    pub fn sigma_x() -> Self {
        let mut p = Self::zero();
        p.add_term(0, 1, Monomial::ONE, C::one());
        p.add_term(1, 0, Monomial::ONE, C::one());
        p
    }

    pub fn sigma_z() -> Self {
        let mut p = Self::zero();
        p.add_term(0, 0, Monomial::ONE, C::one());
        p.add_term(1, 1, Monomial::ONE, -C::one());
        p
    }

    /// Adds `coeff · mono` at `(row, col)`, pruning a resulting zero.
    pub fn add_term(&mut self, row: usize, col: usize, mono: Monomial, coeff: C) {
        assert!(row < 2 && col < 2, "entry ({row},{col}) outside 2×2 matrix");
        if coeff.is_zero() {
            return;
        }
        let map = &mut self.entries[row * 2 + col];
        match map.get_mut(&mono) {
            Some(existing) => {
                let sum = existing.clone() + coeff;
                if sum.is_zero() {
                    map.remove(&mono);
                } else {
                    *existing = sum;
                }
            }
            None => {
                map.insert(mono, coeff);
            }
        }
    }

    pub fn coefficient(&self, row: usize, col: usize, mono: &Monomial) -> Option<&C> {
        self.entries[row * 2 + col].get(mono)
    }

    pub fn entry(&self, row: usize, col: usize) -> &BTreeMap<Monomial, C> {
        &self.entries[row * 2 + col]
    }

    /// All stored terms in canonical order: entry (row-major), then monomial.
    pub fn terms(&self) -> impl Iterator<Item = (Entry, &Monomial, &C)> + '_ {
        Entry::ALL
            .iter()
            .flat_map(move |e| self.entries[e.index()].iter().map(move |(m, c)| (*e, m, c)))
    }

    pub fn len(&self) -> usize {
        self.entries.iter().map(BTreeMap::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(BTreeMap::is_empty)
    }

    /// Maximum total degree `i + j` present; 0 for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms().map(|(_, m, _)| m.degree()).max().unwrap_or(0)
    }

    /// Gradings present across all terms.
    pub fn gradings(&self) -> Vec<u8> {
        let mut g: Vec<u8> = self.terms().map(|(_, m, _)| m.grading).collect();
        g.sort_unstable();
        g.dedup();
        g
    }

    pub fn scale(&self, s: &C) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        self.map_coefficients(|c| c.clone() * s.clone())
    }

    /// Applies `f` to every coefficient, dropping results that become zero.
    pub fn map_coefficients<D: Coefficient>(
        &self,
        mut f: impl FnMut(&C) -> D,
    ) -> OperatorPolynomial<D> {
        let mut out = OperatorPolynomial::zero();
        for (e, m, c) in self.terms() {
            out.add_term(e.row, e.col, *m, f(c));
        }
        out
    }

    pub fn to_float(&self) -> OperatorPolynomial<f64> {
        self.map_coefficients(|c| c.to_f64())
    }

    /// Matrix product with normal ordering of every entry product.
    pub fn multiply(&self, rhs: &Self) -> Self {
        let mut out = Self::zero();
        for r in 0..2 {
            for c in 0..2 {
                for k in 0..2 {
                    let left = &self.entries[r * 2 + k];
                    let right = &rhs.entries[k * 2 + c];
                    for (ml, cl) in left {
                        for (mr, cr) in right {
                            let base = cl.clone() * cr.clone();
                            for (mono, w) in ml.product(mr) {
                                out.add_term(r, c, mono, base.clone() * C::from_int(w));
                            }
                        }
                    }
                }
            }
        }
        out
    }

    pub fn commutator(&self, rhs: &Self) -> Self {
        &self.multiply(rhs) - &rhs.multiply(self)
    }

    /// Conjugate transpose; coefficients are real in both scalar modes.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zero();
        for (e, m, c) in self.terms() {
            let (mono, sign) = m.adjoint();
            out.add_term(e.col, e.row, mono, c.clone() * C::from_int(sign));
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::identity(), |acc, _| acc.multiply(self))
    }

    /// The single scalar `r` with `self = r · other`, if one exists.
    pub fn ratio_to(&self, other: &Self) -> Option<C> {
        if self.len() != other.len() {
            return None;
        }
        let (e, m, c) = other.terms().next()?;
        let mine = self.coefficient(e.row, e.col, m)?;
        let r = mine.clone() / c.clone();
        (other.scale(&r) == *self).then_some(r)
    }
}

impl<C: Coefficient> fmt::Debug for OperatorPolynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<C: Coefficient> fmt::Display for OperatorPolynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first_entry = true;
        for e in Entry::ALL {
            let map = &self.entries[e.index()];
            if map.is_empty() {
                continue;
            }
            if !first_entry {
                f.write_str("; ")?;
            }
            first_entry = false;
            write!(f, "[{},{}]: ", e.row, e.col)?;
            let body: Vec<String> = map
                .iter()
                .map(|(m, c)| format!("({}) {}", c.to_scalar(), m))
                .collect();
            f.write_str(&body.join(" + "))?;
        }
        Ok(())
    }
}

impl<C: Coefficient> Add for &OperatorPolynomial<C> {
    type Output = OperatorPolynomial<C>;

    fn add(self, rhs: Self) -> OperatorPolynomial<C> {
        let mut out = self.clone();
        for (e, m, c) in rhs.terms() {
            out.add_term(e.row, e.col, *m, c.clone());
        }
        out
    }
}

impl<C: Coefficient> Sub for &OperatorPolynomial<C> {
    type Output = OperatorPolynomial<C>;

    fn sub(self, rhs: Self) -> OperatorPolynomial<C> {
        let mut out = self.clone();
        for (e, m, c) in rhs.terms() {
            out.add_term(e.row, e.col, *m, -c.clone());
        }
        out
    }
}

impl<C: Coefficient> Neg for &OperatorPolynomial<C> {
    type Output = OperatorPolynomial<C>;

    fn neg(self) -> OperatorPolynomial<C> {
        self.map_coefficients(|c| -c.clone())
    }
}

impl<C: Coefficient> Mul for &OperatorPolynomial<C> {
    type Output = OperatorPolynomial<C>;

    fn mul(self, rhs: Self) -> OperatorPolynomial<C> {
        self.multiply(rhs)
    }
}
