//! Integer polynomial utilities backing the exact eigenvalue machinery:
//! fraction-free determinants, characteristic polynomials by evaluation and
//! interpolation, and integer root extraction for monic integer polynomials.
//!
//! Root extraction enumerates divisors of the constant term when that is
//! cheap, and otherwise falls back to Sturm-sequence isolation of the real
//! roots, which needs no integer factorization.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::field::Scalar;
use crate::matrix::Matrix;

/// Dense integer polynomial, little-endian (`c[k]` multiplies `x^k`),
/// with no trailing zero coefficients.
pub type IntPoly = Vec<BigInt>;

fn trim(mut p: Vec<BigInt>) -> IntPoly {
    while p.last().map(Zero::is_zero).unwrap_or(false) {
        p.pop();
    }
    p
}

pub fn eval_int(p: &[BigInt], x: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for c in p.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

fn derivative(p: &[BigInt]) -> IntPoly {
    trim(
        p.iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * BigInt::from(k))
            .collect(),
    )
}

/// Sign of `p(a/b)` with `b > 0`, via the homogenized value
/// `sum c_k a^k b^{n-k}`.
fn sign_at(p: &[BigInt], a: &BigInt, b: &BigInt) -> i8 {
    if p.is_empty() {
        return 0;
    }
    let n = p.len() - 1;
    let mut acc = BigInt::zero();
    let mut apow = BigInt::one();
    let mut bpows = vec![BigInt::one(); n + 1];
    for k in 1..=n {
        bpows[k] = &bpows[k - 1] * b;
    }
    for (k, c) in p.iter().enumerate() {
        acc += c * &apow * &bpows[n - k];
        apow *= a;
    }
    match acc.sign() {
        num_bigint::Sign::Minus => -1,
        num_bigint::Sign::NoSign => 0,
        num_bigint::Sign::Plus => 1,
    }
}

// ---------------------------------------------------------------------------
// Rational polynomial helpers used to build Sturm chains with positive
// rescaling only (positive scaling keeps every sign in the chain intact).

type RatPoly = Vec<BigRational>;

fn rat_trim(mut p: RatPoly) -> RatPoly {
    while p.last().map(Zero::is_zero).unwrap_or(false) {
        p.pop();
    }
    p
}

fn rat_from_int(p: &[BigInt]) -> RatPoly {
    p.iter()
        .map(|c| BigRational::from_integer(c.clone()))
        .collect()
}

/// Remainder of `a` modulo `b` in `Q[x]`.
fn rat_rem(a: &RatPoly, b: &RatPoly) -> RatPoly {
    let mut r = a.clone();
    let db = b.len() - 1;
    let lead = b[db].clone();
    while r.len() > db && !r.is_empty() {
        let dr = r.len() - 1;
        let coef = &r[dr] / &lead;
        for k in 0..=db {
            let v = &r[dr - db + k] - &(&coef * &b[k]);
            r[dr - db + k] = v;
        }
        r = rat_trim(r);
        if r.len() <= db {
            break;
        }
    }
    rat_trim(r)
}

/// Exact quotient `a / b` when `b` divides `a` in `Q[x]`.
fn rat_div_exact(a: &RatPoly, b: &RatPoly) -> RatPoly {
    let mut r = a.clone();
    let db = b.len() - 1;
    let lead = b[db].clone();
    let mut q = vec![BigRational::zero(); a.len().saturating_sub(db)];
    while r.len() > db {
        let dr = r.len() - 1;
        let coef = &r[dr] / &lead;
        q[dr - db] = coef.clone();
        for k in 0..=db {
            let v = &r[dr - db + k] - &(&coef * &b[k]);
            r[dr - db + k] = v;
        }
        r = rat_trim(r);
    }
    debug_assert!(r.is_empty(), "division was not exact");
    rat_trim(q)
}

/// Scale by a positive rational so coefficients become coprime integers.
fn primitive_int(p: &RatPoly) -> IntPoly {
    if p.is_empty() {
        return Vec::new();
    }
    let mut lcm = BigInt::one();
    for c in p {
        lcm = lcm.lcm(c.denom());
    }
    let ints: Vec<BigInt> = p
        .iter()
        .map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer())
        .collect();
    let mut gcd = BigInt::zero();
    for c in &ints {
        gcd = gcd.gcd(c);
    }
    if gcd.is_zero() {
        return Vec::new();
    }
    trim(ints.iter().map(|c| c / &gcd).collect())
}

/// Squarefree part `p / gcd(p, p')` as a primitive integer polynomial.
/// Remainders are rescaled to primitive integers every step to keep
/// coefficient growth linear rather than exponential.
fn squarefree_part(p: &[BigInt]) -> IntPoly {
    let a = rat_from_int(p);
    let b = rat_from_int(&derivative(p));
    if b.is_empty() {
        return p.to_vec();
    }
    let (mut x, mut y) = (a.clone(), b);
    while !y.is_empty() {
        let r = rat_from_int(&primitive_int(&rat_rem(&x, &y)));
        x = y;
        y = r;
    }
    if x.len() <= 1 {
        return p.to_vec();
    }
    primitive_int(&rat_div_exact(&a, &x))
}

fn sturm_chain(p: &[BigInt]) -> Vec<IntPoly> {
    let mut chain = vec![p.to_vec(), derivative(p)];
    loop {
        let n = chain.len();
        if chain[n - 1].is_empty() {
            chain.pop();
            break;
        }
        let r = rat_rem(&rat_from_int(&chain[n - 2]), &rat_from_int(&chain[n - 1]));
        if r.is_empty() {
            break;
        }
        let mut r = primitive_int(&r);
        for c in &mut r {
            *c = -c.clone();
        }
        chain.push(r);
    }
    chain
}

fn variations(chain: &[IntPoly], a: &BigInt, b: &BigInt) -> usize {
    let mut count = 0usize;
    let mut prev = 0i8;
    for p in chain {
        let s = sign_at(p, a, b);
        if s == 0 {
            continue;
        }
        if prev != 0 && s != prev {
            count += 1;
        }
        prev = s;
    }
    count
}

/// Number of distinct real roots of a squarefree `p` in `(a, b]`,
/// endpoints given as rationals `a = an/ad`, `b = bn/bd`.
fn roots_in(chain: &[IntPoly], an: &BigInt, ad: &BigInt, bn: &BigInt, bd: &BigInt) -> usize {
    variations(chain, an, ad).saturating_sub(variations(chain, bn, bd))
}

/// Root bound after Fujiwara: for monic `p` of degree `n`, every real root
/// satisfies `|r| <= 2 max_k |a_{n-k}|^{1/k}`. Much tighter than the Cauchy
/// bound when the constant term is a product of small roots.
fn root_bound(p: &[BigInt]) -> BigInt {
    let n = p.len() - 1;
    let lead = p[n].abs();
    let mut best = BigInt::one();
    for k in 1..=n {
        let coeff = p[n - k].abs();
        if coeff.is_zero() {
            continue;
        }
        // ceil((|a_{n-k}| / |a_n|)^(1/k)), computed as an integer k-th root.
        let scaled = (&coeff + &lead - BigInt::one()) / &lead;
        let mut root = scaled.nth_root(k as u32);
        if num_traits::pow::Pow::pow(&root, k as u32) < scaled {
            root += 1;
        }
        if root > best {
            best = root;
        }
    }
    BigInt::from(2) * best + 1
}

/// All integer roots of a squarefree monic polynomial via Sturm bisection.
fn integer_roots_sturm(p: &[BigInt]) -> Vec<BigInt> {
    let chain = sturm_chain(p);
    let bound = root_bound(p);
    let mut out = Vec::new();
    // Stack of half-open intervals (a, b], endpoints as rational pairs.
    let mut stack = vec![(-bound.clone(), BigInt::one(), bound.clone(), BigInt::one())];
    while let Some((an, ad, bn, bd)) = stack.pop() {
        let count = roots_in(&chain, &an, &ad, &bn, &bd);
        if count == 0 {
            continue;
        }
        // Width b - a = (bn*ad - an*bd) / (ad*bd); compare with 1.
        let width_num = &bn * &ad - &an * &bd;
        let width_den = &ad * &bd;
        if width_num <= width_den {
            // At most one integer k with a < k <= b: k = floor(b).
            let k = (&bn).div_floor(&bd);
            if &k * &ad > an && eval_int(p, &k).is_zero() {
                out.push(k);
            }
            continue;
        }
        let mn = &an * &bd + &bn * &ad;
        let md = BigInt::from(2) * &ad * &bd;
        stack.push((an, ad, mn.clone(), md.clone()));
        stack.push((mn, md, bn, bd));
    }
    out.sort();
    out.dedup();
    out
}

fn u64_divisors(n: u64) -> Vec<u64> {
    let mut primes: Vec<(u64, u32)> = Vec::new();
    let mut m = n;
    let mut d = 2u64;
    while d * d <= m {
        if m % d == 0 {
            let mut e = 0;
            while m % d == 0 {
                m /= d;
                e += 1;
            }
            primes.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if m > 1 {
        primes.push((m, 1));
    }
    let mut divs = vec![1u64];
    for (p, e) in primes {
        let base = divs.clone();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            divs.extend(base.iter().map(|d| d * pk));
        }
    }
    divs
}

const DIVISOR_PATH_LIMIT: u64 = 1_000_000_000;

/// All integer roots of a monic integer polynomial, sorted ascending.
///
/// Small constant terms go through rational-root divisor enumeration;
/// larger ones use Sturm isolation so no big-integer factorization is
/// ever attempted.
pub fn integer_roots_monic(p: &[BigInt]) -> Vec<BigInt> {
    let p = trim(p.to_vec());
    assert!(!p.is_empty(), "zero polynomial has every root");
    assert!(p.last().unwrap().is_one(), "polynomial is not monic");
    if p.len() == 1 {
        return Vec::new();
    }
    // Factor out x^k first so the constant term is nonzero.
    let mut shifted = p.clone();
    let mut has_zero_root = false;
    while shifted[0].is_zero() {
        shifted.remove(0);
        has_zero_root = true;
    }
    let mut roots: Vec<BigInt> = Vec::new();
    if has_zero_root {
        roots.push(BigInt::zero());
    }
    if shifted.len() > 1 {
        let c0 = shifted[0].abs();
        if c0 <= BigInt::from(DIVISOR_PATH_LIMIT) {
            let small = c0.to_u64_digits().1.first().copied().expect("nonzero");
            for d in u64_divisors(small) {
                for cand in [BigInt::from(d), -BigInt::from(d)] {
                    if eval_int(&shifted, &cand).is_zero() {
                        roots.push(cand);
                    }
                }
            }
        } else {
            roots.extend(integer_roots_sturm(&squarefree_part(&shifted)));
        }
    }
    roots.sort();
    roots.dedup();
    roots
}

// ---------------------------------------------------------------------------
// Characteristic polynomials.

/// Determinant of an integer matrix by fraction-free Bareiss elimination
/// (all intermediate entries are determinants of leading minors).
pub fn bareiss_det(n: usize, entries: &[BigInt]) -> BigInt {
    assert_eq!(entries.len(), n * n);
    if n == 0 {
        return BigInt::one();
    }
    let mut m: Vec<BigInt> = entries.to_vec();
    let at = |m: &Vec<BigInt>, r: usize, c: usize| m[r * n + c].clone();
    let mut sign = 1i32;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if at(&m, k, k).is_zero() {
            let Some(swap) = (k + 1..n).find(|&r| !at(&m, r, k).is_zero()) else {
                return BigInt::zero();
            };
            for c in 0..n {
                m.swap(k * n + c, swap * n + c);
            }
            sign = -sign;
        }
        let pivot = at(&m, k, k);
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (at(&m, i, j) * &pivot - at(&m, i, k) * at(&m, k, j)) / &prev;
                m[i * n + j] = v;
            }
        }
        prev = pivot;
    }
    let det = at(&m, n - 1, n - 1);
    if sign < 0 {
        -det
    } else {
        det
    }
}

/// Clear denominators of a rational matrix: returns `(c, N)` with
/// `N = c * M` integral and `c > 0` minimal as the lcm of denominators.
pub fn clear_denominators(m: &Matrix) -> (BigInt, Vec<BigInt>) {
    let mut lcm = BigInt::one();
    for e in m.entries() {
        lcm = lcm.lcm(e.as_rational().denom());
    }
    let ints = m
        .entries()
        .iter()
        .map(|e| {
            let r = e.as_rational() * BigRational::from_integer(lcm.clone());
            r.to_integer()
        })
        .collect();
    (lcm, ints)
}

/// Monic characteristic polynomial `det(xI - N)` of an integer matrix,
/// computed by evaluating at `x = 0..n` with Bareiss determinants and
/// interpolating exactly.
pub fn char_poly_int(n: usize, entries: &[BigInt]) -> IntPoly {
    assert_eq!(entries.len(), n * n);
    if n == 0 {
        return vec![BigInt::one()];
    }
    let mut values: Vec<BigInt> = Vec::with_capacity(n + 1);
    for x in 0..=n {
        let mut shifted = entries.iter().map(|e| -e).collect::<Vec<BigInt>>();
        for i in 0..n {
            shifted[i * n + i] += BigInt::from(x);
        }
        values.push(bareiss_det(n, &shifted));
    }
    // Lagrange interpolation on the nodes 0..=n.
    let mut acc: RatPoly = Vec::new();
    for (k, vk) in values.iter().enumerate() {
        if vk.is_zero() {
            continue;
        }
        let mut term: RatPoly = vec![BigRational::from_integer(vk.clone())];
        for j in 0..=n {
            if j == k {
                continue;
            }
            let denom = BigRational::from_integer(BigInt::from(k as i64 - j as i64));
            // term *= (x - j) / (k - j)
            let mut next = vec![BigRational::zero(); term.len() + 1];
            for (d, c) in term.iter().enumerate() {
                let scaled = c / &denom;
                next[d + 1] = &next[d + 1] + &scaled;
                next[d] = &next[d] - &(&scaled * BigRational::from_integer(BigInt::from(j as i64)));
            }
            term = next;
        }
        if acc.len() < term.len() {
            acc.resize(term.len(), BigRational::zero());
        }
        for (d, c) in term.iter().enumerate() {
            acc[d] = &acc[d] + c;
        }
    }
    if acc.len() < n + 1 {
        acc.resize(n + 1, BigRational::zero());
    }
    let out: IntPoly = acc
        .iter()
        .map(|c| {
            debug_assert!(c.is_integer(), "characteristic polynomial not integral");
            c.to_integer()
        })
        .collect();
    debug_assert!(out.last().unwrap().is_one());
    out
}

/// Characteristic polynomial scaled back to the rational matrix: returns the
/// integer clearing factor `c` and the monic char poly of `c * M`, whose
/// integer roots divided by `c` are exactly the rational eigenvalues of `M`.
pub fn scaled_char_poly(m: &Matrix) -> (BigInt, IntPoly) {
    assert!(m.is_square());
    let (c, ints) = clear_denominators(m);
    (c, char_poly_int(m.rows(), &ints))
}

/// Rational eigenvalue candidates of a rational square matrix.
pub fn rational_eigenvalues(m: &Matrix) -> Vec<Scalar> {
    let (c, cp) = scaled_char_poly(m);
    integer_roots_monic(&cp)
        .into_iter()
        .map(|r| Scalar::Rational(BigRational::new(r, c.clone())))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn bareiss_matches_cofactor() {
        // 3x3 cofactor expansion by hand: det = 1(45-48) - 2(36-42) + 3(32-35) = 0
        assert_eq!(
            bareiss_det(3, &ints(&[1, 2, 3, 4, 5, 6, 7, 8, 9])),
            BigInt::zero()
        );
        // det [[2,1],[7,4]] = 1
        assert_eq!(bareiss_det(2, &ints(&[2, 1, 7, 4])), BigInt::one());
        // needs a row swap
        assert_eq!(bareiss_det(2, &ints(&[0, 1, 1, 0])), BigInt::from(-1));
    }

    #[test]
    fn char_poly_companion() {
        // companion matrix of x^2 - x - 1
        let cp = char_poly_int(2, &ints(&[0, 1, 1, 1]));
        assert_eq!(cp, ints(&[-1, -1, 1]));
        // diag(1,2,3): (x-1)(x-2)(x-3) = x^3 - 6x^2 + 11x - 6
        let cp = char_poly_int(3, &ints(&[1, 0, 0, 0, 2, 0, 0, 0, 3]));
        assert_eq!(cp, ints(&[-6, 11, -6, 1]));
    }

    #[test]
    fn integer_roots_small() {
        // (x-2)(x+3)x = x^3 + x^2 - 6x
        let roots = integer_roots_monic(&ints(&[0, -6, 1, 1]));
        assert_eq!(roots, ints(&[-3, 0, 2]));
        // x^2 + 1 has none
        assert!(integer_roots_monic(&ints(&[1, 0, 1])).is_empty());
    }

    #[test]
    fn integer_roots_sturm_path() {
        // Constant term far beyond the divisor-enumeration limit:
        // (x - 10^9)(x + 7)(x - 1) has constant 7 * 10^9.
        let a = BigInt::from(1_000_000_000i64);
        let p = {
            // (x - a)(x + 7)(x - 1) = x^3 + (6 - a) x^2 + (-7 - 6a) x + 7a
            vec![
                BigInt::from(7) * &a,
                BigInt::from(-7) - BigInt::from(6) * &a,
                BigInt::from(6) - &a,
                BigInt::one(),
            ]
        };
        let roots = integer_roots_monic(&p);
        assert_eq!(roots, vec![BigInt::from(-7), BigInt::one(), a]);
        // Same polynomial through the explicit Sturm route.
        let roots2 = integer_roots_sturm(&squarefree_part(&p));
        assert_eq!(roots, roots2);
    }

    #[test]
    fn rational_eigenvalue_scaling() {
        // [[1/2, 0], [0, 1/3]] has eigenvalues 1/2 and 1/3.
        let q = FieldSpec::Rationals;
        let m = Matrix::from_fn(2, 2, q, |r, c| {
            if r == c {
                q.from_ratio(BigInt::from(1), BigInt::from(r as i64 + 2))
                    .unwrap()
            } else {
                q.zero()
            }
        });
        let eig = rational_eigenvalues(&m);
        assert_eq!(eig.len(), 2);
        let half = q.from_ratio(BigInt::from(1), BigInt::from(2)).unwrap();
        let third = q.from_ratio(BigInt::from(1), BigInt::from(3)).unwrap();
        assert!(eig.contains(&half) && eig.contains(&third));
    }
}
