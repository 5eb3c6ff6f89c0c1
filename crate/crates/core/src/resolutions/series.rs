use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dimensions `[dim H^0, dim H^1, ...]` (or resolution ranks).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimSeries {
    pub dims: Vec<usize>,
    pub p: u32,
    pub label: String,
}

impl DimSeries {
    pub fn new(dims: Vec<usize>, p: u32, label: &str) -> Self {
        DimSeries {
            dims,
            p,
            label: label.to_string(),
        }
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }
}

/// `numerator(t) / ∏ (1 − t^{d_j})`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PoincareFit {
    pub numerator: Vec<i64>,
    pub denominator_exponents: Vec<usize>,
    pub verified_through: usize,
}

impl PoincareFit {
    /// Power series coefficients through `max_deg`.
    pub fn expand(&self, max_deg: usize) -> Vec<i64> {
        expand_rational(&self.numerator, &self.denominator_exponents, max_deg)
    }

    /// Order of the pole at `t = 1`.
    pub fn pole_order(&self) -> usize {
        let mut num = self.numerator.clone();
        while num.last() == Some(&0) {
            num.pop();
        }
        if num.is_empty() {
            return 0;
        }
        let mut mult = 0;
        while num.iter().sum::<i64>() == 0 {
            // divide by (1 - t)
            let mut q = Vec::with_capacity(num.len() - 1);
            let mut carry = 0;
            for &c in &num[..num.len() - 1] {
                carry += c;
                q.push(carry);
            }
            num = q;
            mult += 1;
        }
        self.denominator_exponents.len().saturating_sub(mult)
    }

    /// `1+2t+2t^2+t^3 / (1-t^4)` style rendering.
    pub fn render(&self) -> String {
        let num = render_poly(&self.numerator);
        if self.denominator_exponents.is_empty() {
            return num;
        }
        let den: Vec<String> = self
            .denominator_exponents
            .iter()
            .map(|&d| {
                if d == 1 {
                    "(1-t)".to_string()
                } else {
                    format!("(1-t^{d})")
                }
            })
            .collect();
        format!("({num})/{}", den.join(""))
    }
}

pub fn render_poly(c: &[i64]) -> String {
    let mut out = String::new();
    for (i, &a) in c.iter().enumerate() {
        if a == 0 {
            continue;
        }
        let mag = a.unsigned_abs();
        if out.is_empty() {
            if a < 0 {
                out.push('-');
            }
        } else {
            out.push(if a < 0 { '-' } else { '+' });
        }
        let mono = match i {
            0 => String::new(),
            1 => "t".into(),
            _ => format!("t^{i}"),
        };
        if mag != 1 || i == 0 {
            out.push_str(&mag.to_string());
        }
        out.push_str(&mono);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Power series of `num / ∏(1 − t^{d})` through `max_deg`.
pub fn expand_rational(num: &[i64], den: &[usize], max_deg: usize) -> Vec<i64> {
    let mut s = vec![0i64; max_deg + 1];
    for (i, &c) in num.iter().enumerate().take(max_deg + 1) {
        s[i] = c;
    }
    for &d in den {
        if d == 0 {
            continue;
        }
        for i in d..=max_deg {
            s[i] += s[i - d];
        }
    }
    s
}

/// Fits `S = r(t) / ∏(1 − t^{d_j})` with `deg r ≤ Σ d_j`, checking the
/// whole series. `Ok(None)` means no such `r` exists.
pub fn poincare_fit(s: &DimSeries, den: &[usize]) -> Result<Option<PoincareFit>> {
    let total: usize = den.iter().sum();
    let len = s.dims.len();
    if len <= total {
        return Err(Error::InsufficientData {
            got: len,
            need: total,
        });
    }
    if den.contains(&0) {
        return Err(Error::BadParameters("denominator exponent 0".into()));
    }
    let mut c: Vec<i64> = s.dims.iter().map(|&d| d as i64).collect();
    for &d in den {
        for i in (d..len).rev() {
            c[i] -= c[i - d];
        }
    }
    if c[total + 1..].iter().any(|&x| x != 0) {
        return Ok(None);
    }
    c.truncate(total + 1);
    while c.len() > 1 && c.last() == Some(&0) {
        c.pop();
    }
    Ok(Some(PoincareFit {
        numerator: c,
        denominator_exponents: den.to_vec(),
        verified_through: len - 1,
    }))
}

/// Polynomial growth rate `γ` from a finite series.
///
/// With window `w = ⌈L/3⌉`, scan `k = 0, 1, …` and for each `k` the lags
/// `q = 1, 2, …` with `L − kq ≥ w`. If the last `w` entries of the `k`-fold
/// lag-`q` difference vanish, `γ = k`; if they are a nonzero constant,
/// `γ = k + 1`. Lags absorb periodic fluctuation.
pub fn growth_rate(s: &DimSeries) -> Result<usize> {
    let len = s.dims.len();
    if len < 6 {
        return Err(Error::SeriesTooShort { got: len, need: 6 });
    }
    let w = len.div_ceil(3);
    let f: Vec<i64> = s.dims.iter().map(|&d| d as i64).collect();
    let mut last_k = 0;
    for k in 0.. {
        let mut any = false;
        for q in 1.. {
            if k * q + w > len || (k == 0 && q > 1) {
                break;
            }
            any = true;
            let mut diff = f.clone();
            for _ in 0..k {
                diff = (q..diff.len()).map(|t| diff[t] - diff[t - q]).collect();
            }
            let tail = &diff[diff.len() - w..];
            if tail.iter().all(|&x| x == 0) {
                return Ok(k);
            }
            if tail.iter().all(|&x| x == tail[0]) {
                return Ok(k + 1);
            }
        }
        if !any {
            break;
        }
        last_k = k;
    }
    Ok(last_k + 1)
}
