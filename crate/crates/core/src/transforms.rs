//! Kravchuk polynomials, MacWilliams and shadow transforms, and the `γ`
//! multinomials of the Terwilliger algebra.

use crate::enumerator::{EnumKind, SplitEnumerator};
use crate::error::{Error, Result};
use crate::exact::Scalar;

/// `C(n, k)`, zero outside `0 ≤ k ≤ n`.
pub fn binomial(n: i64, k: i64) -> i128 {
    if k < 0 || n < 0 || k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: i128 = 1;
    for i in 0..k {
        r = r * (n - i) as i128 / (i + 1) as i128;
    }
    r
}

pub fn pow(base: i128, e: u32) -> i128 {
    base.pow(e)
}

/// q-ary Kravchuk polynomial `K_i(k, n) = Σ_{j=0}^{i} (-1)^j (q-1)^{i-j} C(k, j) C(n-k, i-j)`.
pub fn kravchuk_q(q: i128, i: usize, k: usize, n: usize) -> Result<i128> {
    if i > n || k > n {
        return Err(Error::InvalidIndex(format!("Kravchuk K_{i}({k}, {n})")));
    }
    let mut s = 0i128;
    for j in 0..=i {
        let term = (q - 1).pow((i - j) as u32) * binomial(k as i64, j as i64) * binomial((n - k) as i64, (i - j) as i64);
        if j % 2 == 0 {
            s += term
        } else {
            s -= term
        }
    }
    Ok(s)
}

/// 4-ary Kravchuk polynomial.
pub fn kravchuk(i: usize, k: usize, n: usize) -> Result<i128> {
    kravchuk_q(4, i, k, n)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KravchukTable {
    n: usize,
    entries: Vec<i128>,
}

impl KravchukTable {
    pub fn new(n: usize) -> Self {
        let mut entries = Vec::with_capacity((n + 1) * (n + 1));
        for i in 0..=n {
            for k in 0..=n {
                entries.push(kravchuk(i, k, n).expect("indices in range"));
            }
        }
        KravchukTable { n, entries }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `K_i(k, n)`.
    pub fn get(&self, i: usize, k: usize) -> i128 {
        self.entries[i * (self.n + 1) + k]
    }
}

/// Whether `(i, j, t, p)` indexes a Terwilliger basis matrix for length `n`.
pub fn valid_tuple(i: usize, j: usize, t: usize, p: usize, n: usize) -> bool {
    i <= n && j <= n && p <= t && t <= i.min(j) && i + j <= n + t
}

/// `γ_{i,j}^{t,p} = 2^{t-p} 3^{i+j-t} · n! / (p! (t-p)! (i-t)! (j-t)! (n-i-j+t)!)`,
/// zero off the tuple domain.
pub fn gamma(i: usize, j: usize, t: usize, p: usize, n: usize) -> i128 {
    if !valid_tuple(i, j, t, p, n) {
        return 0;
    }
    let multinomial = binomial(n as i64, p as i64)
        * binomial((n - p) as i64, (t - p) as i64)
        * binomial((n - t) as i64, (i - t) as i64)
        * binomial((n - i) as i64, (j - t) as i64);
    2i128.pow((t - p) as u32) * 3i128.pow((i + j - t) as u32) * multinomial
}

/// Table of all `γ` for a fixed `n`, indexed like [`crate::terwilliger::TupleDomain`].
#[derive(Clone, Debug)]
pub struct GammaTable {
    n: usize,
    values: Vec<i128>,
}

impl GammaTable {
    pub fn new(n: usize) -> Self {
        let dom = crate::terwilliger::TupleDomain::new(n);
        GammaTable { n, values: dom.iter().map(|(i, j, t, p)| gamma(i, j, t, p, n)).collect() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[i128] {
        &self.values
    }
}

fn split_kravchuk<T: Scalar>(a: &SplitEnumerator<T>, signed: bool) -> SplitEnumerator<T> {
    let (n, c) = (a.n(), a.c());
    let kn = KravchukTable::new(n);
    let kc = KravchukTable::new(c);
    let mut out = SplitEnumerator::zeros(n, c, a.kind());
    for i in 0..=n {
        for j in 0..=c {
            let mut s = T::zero();
            for u in 0..=n {
                for v in 0..=c {
                    let mut coef = kn.get(i, u) * kc.get(j, v);
                    if signed && (u + v) % 2 == 1 {
                        coef = -coef;
                    }
                    if coef != 0 {
                        s = s + T::from_i128(coef) * a.get(u, v).clone();
                    }
                }
            }
            out.set(i, j, s);
        }
    }
    out
}

/// `B_{i,j} = (M / 2^{n+c}) Σ_u Σ_v K_i(u, n) K_j(v, c) A_{u,v}`.
pub fn macwilliams_split<T: Scalar>(a: &SplitEnumerator<T>, m: &T) -> Result<SplitEnumerator<T>> {
    let scale = m.clone() / T::from_i128(1i128 << (a.n() + a.c()));
    Ok(split_kravchuk(a, false).scaled(&scale).with_kind(EnumKind::B))
}

/// `Sh(i, j) = Σ_u Σ_v (-1)^{u+v} K_i(u, n) K_j(v, c) A_{u,v}` (unscaled).
pub fn shadow_transform_split<T: Scalar>(a: &SplitEnumerator<T>) -> Result<SplitEnumerator<T>> {
    Ok(split_kravchuk(a, true).with_kind(EnumKind::Sh))
}

/// Unsplit MacWilliams `B_j = (M / 2^n) Σ_i K_j(i, n) A_i`.
pub fn macwilliams<T: Scalar>(a: &[T], m: &T) -> Result<Vec<T>> {
    let e = SplitEnumerator::from_unsplit(EnumKind::A, a.to_vec())?;
    Ok(macwilliams_split(&e, m)?.unsplit())
}

/// Unsplit shadow transform `Sh_j = Σ_i (-1)^i K_j(i, n) A_i`.
pub fn shadow_transform<T: Scalar>(a: &[T]) -> Result<Vec<T>> {
    let e = SplitEnumerator::from_unsplit(EnumKind::A, a.to_vec())?;
    Ok(shadow_transform_split(&e)?.unsplit())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, ratio};
    use num_rational::BigRational;

    #[test]
    fn kravchuk_values() {
        assert_eq!(kravchuk(1, 0, 5).unwrap(), 15);
        assert_eq!(kravchuk(1, 2, 5).unwrap(), 7);
        for n in 0..6 {
            for k in 0..=n {
                assert_eq!(kravchuk(0, k, n).unwrap(), 1);
            }
        }
        assert!(kravchuk(3, 0, 2).is_err());
        assert_eq!(kravchuk_q(2, 1, 1, 3).unwrap(), 1);
    }

    #[test]
    fn gamma_values() {
        for n in 1..7 {
            for i in 0..=n {
                assert_eq!(gamma(i, 0, 0, 0, n), 3i128.pow(i as u32) * binomial(n as i64, i as i64));
            }
            assert_eq!(gamma(1, 1, 1, 1, n), 3 * n as i128);
        }
        assert_eq!(gamma(1, 1, 0, 0, 2), 18);
        assert_eq!(gamma(2, 2, 0, 0, 2), 0);
    }

    #[test]
    fn five_qubit_transforms() {
        let a: Vec<BigRational> = [1, 0, 0, 0, 15, 0].iter().map(|&v| int(v)).collect();
        let b = macwilliams(&a, &int(2)).unwrap();
        assert_eq!(b, [1, 0, 0, 30, 15, 18].iter().map(|&v| int(v)).collect::<Vec<_>>());
        let d: Vec<BigRational> = shadow_transform(&a).unwrap().into_iter().map(|v| v * ratio(1, 16)).collect();
        assert_eq!(d, [1, 0, 0, 30, 15, 18].iter().map(|&v| int(v)).collect::<Vec<_>>());
    }

    #[test]
    fn five_six_two_transforms() {
        let a = vec![int(1), int(0), int(0), int(0), ratio(5, 3), ratio(8, 3)];
        let b = macwilliams(&a, &int(6)).unwrap();
        assert_eq!(b, [1, 0, 20, 50, 75, 46].iter().map(|&v| int(v)).collect::<Vec<_>>());
        // Tr(P P̂) = 0 for this code, so D is the shadow scaled by M^2 / 2^n.
        let d: Vec<BigRational> = shadow_transform(&a).unwrap().into_iter().map(|v| v * ratio(36, 32)).collect();
        assert_eq!(d, [0, 30, 60, 360, 420, 282].iter().map(|&v| int(v)).collect::<Vec<_>>());
    }

    #[test]
    fn full_space_code() {
        let (n, c) = (3, 2);
        let mut a = SplitEnumerator::<BigRational>::zeros(n, c, EnumKind::A);
        a.set(0, 0, int(1));
        let b = macwilliams_split(&a, &int(1 << (n + c))).unwrap();
        for i in 0..=n {
            for j in 0..=c {
                let expect = 3i128.pow(i as u32) * binomial(n as i64, i as i64) * 3i128.pow(j as u32) * binomial(c as i64, j as i64);
                assert_eq!(*b.get(i, j), int(expect));
            }
        }
    }

    #[test]
    fn shape_mismatch_rejected() {
        assert!(SplitEnumerator::<f64>::from_rows(2, 1, EnumKind::A, vec![vec![1.0, 0.0]]).is_err());
    }
}
