use crate::arith::{gcd, gcd_slice};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;

/// `x = D·ab·u`, `y = D·ac·v`, `z = D·bc·w` with `(a,b,c)` pairwise coprime,
/// `(u,v,w)` pairwise coprime and `gcd(u,c) = gcd(v,b) = gcd(w,a) = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TripleDecomposition {
    pub d: u64,
    pub abc: (u64, u64, u64),
    pub uvw: (u64, u64, u64),
}

impl TripleDecomposition {
    pub fn reconstruct(&self) -> (u64, u64, u64) {
        let (a, b, c) = self.abc;
        let (u, v, w) = self.uvw;
        (self.d * a * b * u, self.d * a * c * v, self.d * b * c * w)
    }

    /// `D·abc·uvw`, which equals `lcm(x, y, z)`.
    pub fn lcm(&self) -> u128 {
        let (a, b, c) = self.abc;
        let (u, v, w) = self.uvw;
        [self.d, a, b, c, u, v, w].iter().map(|&k| k as u128).product()
    }

    pub fn is_valid(&self) -> bool {
        let (a, b, c) = self.abc;
        let (u, v, w) = self.uvw;
        let pc = |x, y, z| gcd(x, y) == 1 && gcd(x, z) == 1 && gcd(y, z) == 1;
        pc(a, b, c) && pc(u, v, w) && gcd(u, c) == 1 && gcd(v, b) == 1 && gcd(w, a) == 1
    }
}

/// The unique decomposition of a positive triple: `D = gcd(x,y,z)`,
/// `a = gcd(x,y)/D`, `b = gcd(x,z)/D`, `c = gcd(y,z)/D`.
pub fn decompose_triple(x: u64, y: u64, z: u64) -> Result<TripleDecomposition> {
    if x == 0 || y == 0 || z == 0 {
        return Err(Error::invalid("triple entries must be >= 1"));
    }
    let d = gcd_slice(&[x, y, z]);
    let a = gcd(x, y) / d;
    let b = gcd(x, z) / d;
    let c = gcd(y, z) / d;
    Ok(TripleDecomposition {
        d,
        abc: (a, b, c),
        uvw: (x / (d * a * b), y / (d * a * c), z / (d * b * c)),
    })
}

/// `lcm(x)` from gcds alone: the product over non-empty sub-tuples `S` of
/// `gcd(x_S)^{(−1)^{|S|+1}}`. Returned as a rational so a failure of the
/// identity would be visible.
pub fn lcm_via_gcd_product(xs: &[u64]) -> Result<BigRational> {
    if xs.is_empty() || xs.len() > 24 {
        return Err(Error::invalid(format!("tuple length must be in 1..=24, got {}", xs.len())));
    }
    if xs.contains(&0) {
        return Err(Error::invalid("tuple entries must be >= 1"));
    }
    let mut num = BigInt::from(1u8);
    let mut den = BigInt::from(1u8);
    let mut sub = Vec::with_capacity(xs.len());
    for mask in 1u32..(1 << xs.len()) {
        sub.clear();
        sub.extend(xs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &x)| x));
        let g = BigInt::from(gcd_slice(&sub));
        if mask.count_ones() % 2 == 1 {
            num *= g;
        } else {
            den *= g;
        }
    }
    Ok(BigRational::new(num, den))
}
