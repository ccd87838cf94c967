//! Coefficient parsing: decimals or exact rationals `p/q`.

use num_rational::Ratio;

/// Parses a decimal or a rational `p/q`; rationals are reduced before the
/// single rounding to `f64`.
pub fn parse_coeff(s: &str) -> Result<f64, String> {
    let s = s.trim();
    let x = if s.contains('/') {
        let r: Ratio<i64> = s.parse().map_err(|_| format!("invalid rational {s:?}"))?;
        *r.numer() as f64 / *r.denom() as f64
    } else {
        s.parse::<f64>().map_err(|_| format!("invalid number {s:?}"))?
    };
    if x.is_finite() {
        Ok(x)
    } else {
        Err(format!("non-finite coefficient {s:?}"))
    }
}

/// Parses six comma-separated coefficients.
pub fn parse_tuple(s: &str) -> Result<[f64; 6], String> {
    let parts: Vec<f64> = s.split(',').map(parse_coeff).collect::<Result<_, _>>()?;
    parts
        .try_into()
        .map_err(|v: Vec<f64>| format!("expected 6 coefficients ae,a12,a13,a23,re123,im123, got {}", v.len()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimals_and_rationals() {
        assert_eq!(parse_coeff("0.25").unwrap(), 0.25);
        assert_eq!(parse_coeff("1/3").unwrap(), 1.0 / 3.0);
        assert_eq!(parse_coeff("-2/6").unwrap(), -1.0 / 3.0);
        assert_eq!(parse_coeff("2").unwrap(), 2.0);
        assert!(parse_coeff("1/0").is_err());
        assert!(parse_coeff("inf").is_err());
        assert!(parse_coeff("x").is_err());
    }

    #[test]
    fn tuples() {
        assert_eq!(parse_tuple("1,0,0,0,0,-1/2").unwrap(), [1.0, 0.0, 0.0, 0.0, 0.0, -0.5]);
        assert!(parse_tuple("1,2,3").is_err());
    }
}
