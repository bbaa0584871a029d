//! Exact univariate polynomials over Q with Sturm-chain real-root counting,
//! rational root extraction, and a small multivariate polynomial type used
//! to check vector-field commutators symbolically.

use crate::rat::{sign, Rat};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;

/// Univariate polynomial, coefficients in ascending degree, normalized so
/// the leading coefficient is nonzero (the zero polynomial has no coeffs).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    coeffs: Vec<Rat>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: vec![] }
    }

    pub fn constant(c: Rat) -> Self {
        Poly::new(vec![c])
    }

    pub fn var() -> Self {
        Poly::new(vec![Rat::zero(), Rat::one()])
    }

    /// `c0 + c1 t`.
    pub fn linear(c0: Rat, c1: Rat) -> Self {
        Poly::new(vec![c0, c1])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<&Rat> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![Rat::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            out[i] += c;
        }
        Poly::new(out)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scale(&-Rat::one()))
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        Poly::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rat::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    /// Euclidean remainder `self mod other`; `other` must be nonzero.
    pub fn rem(&self, other: &Poly) -> Poly {
        assert!(!other.is_zero());
        let mut r = self.clone();
        let d = other.degree();
        let lead = other.leading().unwrap().clone();
        while !r.is_zero() && r.degree() >= d {
            let shift = r.degree() - d;
            let factor = r.leading().unwrap() / &lead;
            let mut sub = vec![Rat::zero(); shift];
            sub.extend(other.coeffs.iter().map(|c| c * &factor));
            r = r.sub(&Poly::new(sub));
            if r.coeffs.len() > shift + d {
                // numerical safety net: forced cancellation of the lead
                r.coeffs.truncate(shift + d);
                r = Poly::new(r.coeffs);
            }
        }
        r
    }

    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            let inv = a.leading().unwrap().clone().recip();
            a.scale(&inv) // monic
        }
    }

    /// Squarefree part `self / gcd(self, self')`.
    pub fn squarefree(&self) -> Poly {
        if self.is_zero() || self.degree() == 0 {
            return self.clone();
        }
        let g = self.gcd(&self.derivative());
        if g.degree() == 0 {
            return self.clone();
        }
        self.div_exact(&g)
    }

    /// Exact division; panics when the division is not exact.
    pub fn div_exact(&self, other: &Poly) -> Poly {
        assert!(!other.is_zero());
        let mut r = self.clone();
        let d = other.degree();
        let lead = other.leading().unwrap().clone();
        let mut q = vec![Rat::zero(); self.coeffs.len().saturating_sub(d)];
        while !r.is_zero() && r.degree() >= d {
            let shift = r.degree() - d;
            let factor = r.leading().unwrap() / &lead;
            q[shift] = factor.clone();
            let mut sub = vec![Rat::zero(); shift];
            sub.extend(other.coeffs.iter().map(|c| c * &factor));
            r = r.sub(&Poly::new(sub));
        }
        assert!(r.is_zero(), "div_exact: remainder is nonzero");
        Poly::new(q)
    }
}

/// Sign of a polynomial at +∞ / -∞ / a finite point.
#[derive(Clone, Debug)]
pub enum Place {
    NegInf,
    At(Rat),
    PosInf,
}

fn sign_at(p: &Poly, place: &Place) -> i32 {
    if p.is_zero() {
        return 0;
    }
    match place {
        Place::At(x) => sign(&p.eval(x)),
        Place::PosInf => sign(p.leading().unwrap()),
        Place::NegInf => {
            let s = sign(p.leading().unwrap());
            if p.degree() % 2 == 0 {
                s
            } else {
                -s
            }
        }
    }
}

/// The Sturm chain of `p`: `p, p', -rem(...)` down to a constant.
pub fn sturm_chain(p: &Poly) -> Vec<Poly> {
    let mut chain = vec![p.clone(), p.derivative()];
    loop {
        let n = chain.len();
        if chain[n - 1].is_zero() {
            chain.pop();
            break;
        }
        let r = chain[n - 2].rem(&chain[n - 1]);
        if r.is_zero() {
            break;
        }
        chain.push(r.scale(&-Rat::one()));
    }
    chain
}

fn variations(chain: &[Poly], place: &Place) -> usize {
    let signs: Vec<i32> = chain
        .iter()
        .map(|p| sign_at(p, place))
        .filter(|&s| s != 0)
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Number of distinct real roots of `p` in `(a, b]`-style bounded or
/// unbounded intervals. Pass `Place::NegInf` / `Place::PosInf` for the whole
/// line.
pub fn count_real_roots_between(p: &Poly, lo: &Place, hi: &Place) -> usize {
    if p.is_zero() {
        panic!("root counting on the zero polynomial");
    }
    if p.degree() == 0 {
        return 0;
    }
    let sf = p.squarefree();
    let chain = sturm_chain(&sf);
    let va = variations(&chain, lo);
    let vb = variations(&chain, hi);
    va.saturating_sub(vb)
}

/// Number of distinct real roots of `p`.
pub fn count_real_roots(p: &Poly) -> usize {
    count_real_roots_between(p, &Place::NegInf, &Place::PosInf)
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    if n.is_zero() {
        return vec![];
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            small.push(d.clone());
            large.push(&n / &d);
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small.dedup();
    small
}

/// All rational roots of `p` (distinct), by the rational root theorem on the
/// integer-cleared polynomial.
pub fn rational_roots(p: &Poly) -> Vec<Rat> {
    if p.is_zero() || p.degree() == 0 {
        return vec![];
    }
    // clear denominators
    let mut lcm = BigInt::one();
    for c in p.coeffs() {
        lcm = lcm.lcm(c.denom());
    }
    let ints: Vec<BigInt> = p
        .coeffs()
        .iter()
        .map(|c| c.numer() * (&lcm / c.denom()))
        .collect();
    // strip trailing zero constant terms: x = 0 is a root
    let mut roots = Vec::new();
    let mut low = 0usize;
    while low < ints.len() && ints[low].is_zero() {
        low += 1;
    }
    if low > 0 {
        roots.push(Rat::zero());
    }
    if low >= ints.len() {
        return roots;
    }
    let a0 = &ints[low];
    let an = ints.last().unwrap();
    for p_div in divisors(a0) {
        for q_div in divisors(an) {
            for s in [1i64, -1] {
                let cand = Rat::new(&p_div * BigInt::from(s), q_div.clone());
                if p.eval(&cand).is_zero() && !roots.contains(&cand) {
                    roots.push(cand);
                }
            }
        }
    }
    roots.sort();
    roots
}

// ---------------------------------------------------------------------------
// Multivariate polynomials (tiny; used for symbolic vector-field brackets)
// ---------------------------------------------------------------------------

/// Sparse multivariate polynomial over Q in a fixed number of variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiPoly {
    vars: usize,
    terms: BTreeMap<Vec<u32>, Rat>,
}

impl MultiPoly {
    pub fn zero(vars: usize) -> Self {
        MultiPoly {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: usize, c: Rat) -> Self {
        let mut p = MultiPoly::zero(vars);
        if !c.is_zero() {
            p.terms.insert(vec![0; vars], c);
        }
        p
    }

    pub fn var(vars: usize, i: usize) -> Self {
        let mut exp = vec![0u32; vars];
        exp[i] = 1;
        let mut p = MultiPoly::zero(vars);
        p.terms.insert(exp, Rat::one());
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        assert_eq!(self.vars, other.vars);
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            let entry = terms.entry(e.clone()).or_insert_with(Rat::zero);
            *entry += c;
            if entry.is_zero() {
                terms.remove(e);
            }
        }
        MultiPoly {
            vars: self.vars,
            terms,
        }
    }

    pub fn sub(&self, other: &MultiPoly) -> MultiPoly {
        self.add(&other.scale(&-Rat::one()))
    }

    pub fn scale(&self, c: &Rat) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(self.vars);
        }
        MultiPoly {
            vars: self.vars,
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect(),
        }
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero(self.vars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                let entry = out.terms.entry(e).or_insert_with(Rat::zero);
                *entry += c1 * c2;
            }
        }
        out.terms.retain(|_, c| !c.is_zero());
        out
    }

    pub fn partial(&self, i: usize) -> MultiPoly {
        let mut out = MultiPoly::zero(self.vars);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[i] -= 1;
            let coeff = c * Rat::from_integer(BigInt::from(e[i]));
            let entry = out.terms.entry(e2).or_insert_with(Rat::zero);
            *entry += coeff;
        }
        out.terms.retain(|_, c| !c.is_zero());
        out
    }
}

/// Lie bracket of polynomial vector fields: `[F, G]_c = Σ_j (F_j ∂_j G_c - G_j ∂_j F_c)`.
pub fn vf_bracket(f: &[MultiPoly], g: &[MultiPoly]) -> Vec<MultiPoly> {
    let dim = f.len();
    assert_eq!(g.len(), dim);
    (0..dim)
        .map(|c| {
            let mut acc = MultiPoly::zero(dim);
            for j in 0..dim {
                acc = acc.add(&f[j].mul(&g[c].partial(j)));
                acc = acc.sub(&g[j].mul(&f[c].partial(j)));
            }
            acc
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{int, rat};

    fn p(coeffs: &[i64]) -> Poly {
        Poly::new(coeffs.iter().map(|&c| int(c)).collect())
    }

    #[test]
    fn sturm_counts_roots() {
        // (x-1)(x+2) = x² + x - 2
        assert_eq!(count_real_roots(&p(&[-2, 1, 1])), 2);
        // x² + 1
        assert_eq!(count_real_roots(&p(&[1, 0, 1])), 0);
        // x³ - x = x(x-1)(x+1)
        assert_eq!(count_real_roots(&p(&[0, -1, 0, 1])), 3);
        // double root counted once on the squarefree part
        assert_eq!(count_real_roots(&p(&[1, -2, 1])), 1);
        // roots in an interval
        assert_eq!(
            count_real_roots_between(&p(&[0, -1, 0, 1]), &Place::At(int(0)), &Place::PosInf),
            1
        );
    }

    #[test]
    fn rational_root_extraction() {
        // (2x - 1)(x + 3)(x² + 1) has rational roots 1/2, -3
        let q = p(&[-1, 2]).mul(&p(&[3, 1])).mul(&p(&[1, 0, 1]));
        assert_eq!(rational_roots(&q), vec![int(-3), rat(1, 2)]);
        // x² - 2 has no rational roots but 2 real ones
        assert!(rational_roots(&p(&[-2, 0, 1])).is_empty());
        assert_eq!(count_real_roots(&p(&[-2, 0, 1])), 2);
        // x³: root zero
        assert_eq!(rational_roots(&p(&[0, 0, 0, 1])), vec![int(0)]);
    }

    #[test]
    fn gcd_and_division() {
        let a = p(&[-1, 0, 1]); // x² - 1
        let b = p(&[1, 1]); // x + 1
        assert_eq!(a.gcd(&b), b.scale(&int(1)));
        assert_eq!(a.div_exact(&b), p(&[-1, 1]));
    }

    #[test]
    fn multipoly_partial_derivatives() {
        // d/dx (x²y) = 2xy
        let x = MultiPoly::var(2, 0);
        let y = MultiPoly::var(2, 1);
        let f = x.mul(&x).mul(&y);
        let expect = x.mul(&y).scale(&int(2));
        assert_eq!(f.partial(0), expect);
    }
}
