//! Truncated power series, the magnitude of a graph, and Euler
//! characteristic counts of path generators.

use crate::graph::{Graph, Vertex};
use crate::{Error, Result};
use num::{BigInt, BigRational, One, Signed, Zero};
use std::fmt;

/// Power series truncated to a fixed number of coefficients, indexed by
/// power of q. Arithmetic is exact up to the truncation order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerSeries {
    coeffs: Vec<BigRational>,
}

impl PowerSeries {
    pub fn from_rationals(coeffs: Vec<BigRational>) -> PowerSeries {
        assert!(!coeffs.is_empty(), "a series keeps at least the constant term");
        PowerSeries { coeffs }
    }

    pub fn from_integers(coeffs: &[i64]) -> PowerSeries {
        PowerSeries::from_rationals(
            coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect(),
        )
    }

    pub fn zero(order: usize) -> PowerSeries {
        assert!(order >= 1);
        PowerSeries { coeffs: vec![BigRational::zero(); order] }
    }

    /// Number of retained coefficients; degrees run over `0..order`.
    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn add(&self, rhs: &PowerSeries) -> PowerSeries {
        let order = self.order().min(rhs.order());
        PowerSeries::from_rationals(
            (0..order).map(|i| &self.coeffs[i] + &rhs.coeffs[i]).collect(),
        )
    }

    pub fn sub(&self, rhs: &PowerSeries) -> PowerSeries {
        let order = self.order().min(rhs.order());
        PowerSeries::from_rationals(
            (0..order).map(|i| &self.coeffs[i] - &rhs.coeffs[i]).collect(),
        )
    }

    pub fn mul(&self, rhs: &PowerSeries) -> PowerSeries {
        let order = self.order().min(rhs.order());
        let mut out = vec![BigRational::zero(); order];
        for (i, a) in self.coeffs.iter().take(order).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().take(order - i).enumerate() {
                out[i + j] += a * b;
            }
        }
        PowerSeries::from_rationals(out)
    }

    /// Multiplicative inverse up to the truncation order. The constant term
    /// must be nonzero.
    pub fn invert(&self) -> Result<PowerSeries> {
        if self.coeffs[0].is_zero() {
            return Err(Error::InvalidParam(
                "cannot invert a series with zero constant term".into(),
            ));
        }
        let order = self.order();
        let mut out = vec![BigRational::zero(); order];
        out[0] = self.coeffs[0].recip();
        for n in 1..order {
            let mut acc = BigRational::zero();
            for i in 1..=n {
                acc += &self.coeffs[i] * &out[n - i];
            }
            out[n] = -acc / &self.coeffs[0];
        }
        Ok(PowerSeries::from_rationals(out))
    }

    /// Extracts the coefficients as integers, failing if any coefficient is
    /// a non-integer rational.
    pub fn integer_coeffs(&self) -> Result<Vec<BigInt>> {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                if c.is_integer() {
                    Ok(c.to_integer())
                } else {
                    Err(Error::Internal(format!("coefficient of q^{} is not an integer: {}", i, c)))
                }
            })
            .collect()
    }
}

fn fmt_terms(f: &mut fmt::Formatter<'_>, coeffs: &[BigRational]) -> fmt::Result {
    let mut wrote = false;
    for (k, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let mag = c.abs();
        if wrote {
            write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
        } else if c.is_negative() {
            write!(f, "-")?;
        }
        wrote = true;
        match k {
            0 => write!(f, "{}", mag)?,
            _ => {
                if !mag.is_one() {
                    write!(f, "{}", mag)?;
                }
                if k == 1 {
                    write!(f, "q")?;
                } else {
                    write!(f, "q^{}", k)?;
                }
            }
        }
    }
    if !wrote {
        write!(f, "0")?;
    }
    Ok(())
}

impl fmt::Display for PowerSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_terms(f, &self.coeffs)
    }
}

/// Ratio of two integer polynomials whose denominator has nonzero constant
/// term, so it expands as a power series.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalFunction {
    numerator: Vec<BigInt>,
    denominator: Vec<BigInt>,
}

impl RationalFunction {
    pub fn new(numerator: Vec<BigInt>, denominator: Vec<BigInt>) -> Result<RationalFunction> {
        if denominator.first().is_none_or(|c| c.is_zero()) {
            return Err(Error::InvalidParam(
                "rational function denominator needs a nonzero constant term".into(),
            ));
        }
        let trim = |mut v: Vec<BigInt>| {
            while v.len() > 1 && v.last().is_some_and(|c| c.is_zero()) {
                v.pop();
            }
            v
        };
        Ok(RationalFunction { numerator: trim(numerator), denominator: trim(denominator) })
    }

    pub fn numerator(&self) -> &[BigInt] {
        &self.numerator
    }

    pub fn denominator(&self) -> &[BigInt] {
        &self.denominator
    }

    pub fn expand(&self, order: usize) -> PowerSeries {
        let pad = |poly: &[BigInt]| {
            let mut coeffs = vec![BigRational::zero(); order];
            for (i, c) in poly.iter().take(order).enumerate() {
                coeffs[i] = BigRational::from_integer(c.clone());
            }
            PowerSeries::from_rationals(coeffs)
        };
        let den = pad(&self.denominator)
            .invert()
            .expect("denominator constant term is nonzero by construction");
        pad(&self.numerator).mul(&den)
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rat = |v: &[BigInt]| -> Vec<BigRational> {
            v.iter().map(|c| BigRational::from_integer(c.clone())).collect()
        };
        fmt_terms(f, &rat(&self.numerator))?;
        if self.denominator.len() > 1 || !self.denominator[0].is_one() {
            write!(f, "/(")?;
            fmt_terms(f, &rat(&self.denominator))?;
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// Magnitude of a connected graph as a truncated power series: the sum of
/// all entries of Z^{-1}, where Z_{uv} = q^{d(u,v)}. With Z = I + N the
/// inverse expands as the Neumann series Σ_{i>=0} (-N)^i, which converges
/// coefficientwise because N has no constant term.
pub fn magnitude_series(g: &Graph, order: usize) -> Result<PowerSeries> {
    if order == 0 {
        return Err(Error::InvalidParam("series order must be at least 1".into()));
    }
    let d = g.apsp()?;
    let n = g.vertex_count();
    // Vector iteration: cur = (-N)^i applied to the all-ones vector.
    let mut cur = vec![vec![BigRational::zero(); order]; n];
    for row in cur.iter_mut() {
        row[0] = BigRational::one();
    }
    let mut acc = cur.clone();
    for _ in 1..order {
        let mut next = vec![vec![BigRational::zero(); order]; n];
        for (u, next_u) in next.iter_mut().enumerate() {
            for (x, cur_x) in cur.iter().enumerate() {
                if x == u {
                    continue;
                }
                let shift = d.dist(u as Vertex, x as Vertex) as usize;
                for j in 0..order.saturating_sub(shift) {
                    let term = &cur_x[j];
                    if !term.is_zero() {
                        next_u[j + shift] -= term;
                    }
                }
            }
        }
        for (acc_u, next_u) in acc.iter_mut().zip(&next) {
            for (a, t) in acc_u.iter_mut().zip(next_u) {
                *a += t;
            }
        }
        cur = next;
    }
    let mut total = vec![BigRational::zero(); order];
    for row in &acc {
        for (t, c) in total.iter_mut().zip(row) {
            *t += c;
        }
    }
    let series = PowerSeries::from_rationals(total);
    series.integer_coeffs()?;
    Ok(series)
}

/// Closed form for the magnitude of a graph whose distance count profile is
/// the same from every vertex: |V| / Σ_x q^{d(a,x)}.
pub fn speyer_magnitude(g: &Graph, basepoint: Vertex) -> Result<RationalFunction> {
    let d = g.apsp()?;
    let profile = d.profile(basepoint);
    for v in 0..g.vertex_count() as Vertex {
        if d.profile(v) != profile {
            return Err(Error::Precondition(format!(
                "vertices {} and {} have different distance profiles",
                basepoint, v
            )));
        }
    }
    RationalFunction::new(
        vec![BigInt::from(g.vertex_count())],
        profile.into_iter().map(BigInt::from).collect(),
    )
}

/// Alternating count Σ_k (-1)^k |I_{k,l}| of the length-l path generators,
/// computed by dynamic programming over (last vertex, accumulated length)
/// without enumerating the generators themselves.
pub fn chain_euler(g: &Graph, l: u32) -> Result<BigInt> {
    let d = g.apsp()?;
    let n = g.vertex_count();
    let l = l as usize;
    // ways[v][s] counts sequences of the current length ending at v with
    // accumulated length s.
    let mut ways = vec![vec![BigInt::zero(); l + 1]; n];
    for row in ways.iter_mut() {
        row[0] = BigInt::one();
    }
    let mut euler = if l == 0 { BigInt::from(n) } else { BigInt::zero() };
    let mut sign_negative = true;
    for _ in 1..=l {
        let mut next = vec![vec![BigInt::zero(); l + 1]; n];
        for (v, next_v) in next.iter_mut().enumerate() {
            for (u, ways_u) in ways.iter().enumerate() {
                if u == v {
                    continue;
                }
                let step = d.dist(u as Vertex, v as Vertex) as usize;
                for s in step..=l {
                    let from = &ways_u[s - step];
                    if !from.is_zero() {
                        next_v[s] += from;
                    }
                }
            }
        }
        for row in &next {
            if sign_negative {
                euler -= &row[l];
            } else {
                euler += &row[l];
            }
        }
        sign_negative = !sign_negative;
        ways = next;
    }
    Ok(euler)
}
