//! Parsing of τ grids, λ selections and half-integer spins.

use qso3_core::HalfInt;

use crate::error::CliError;

/// `a,b,c` or `start:stop:count` (inclusive, evenly spaced).
pub fn parse_tau_grid(s: &str) -> Result<Vec<f64>, CliError> {
    let bad = || CliError::Usage(format!("invalid tau grid `{s}`"));
    let out = if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        let [a, b, n] = parts.as_slice() else { return Err(bad()) };
        let (a, b): (f64, f64) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
        let n: usize = n.trim().parse().map_err(|_| bad())?;
        match n {
            0 => return Err(bad()),
            1 => vec![a],
            _ => (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect(),
        }
    } else {
        s.split(',').map(|t| t.trim().parse::<f64>().map_err(|_| bad())).collect::<Result<_, _>>()?
    };
    if out.iter().any(|t: &f64| !t.is_finite()) {
        return Err(bad());
    }
    Ok(out)
}

/// `4`, `1,2,5` or an inclusive range `0:10`.
pub fn parse_lambdas(s: &str) -> Result<Vec<u32>, CliError> {
    let bad = || CliError::Usage(format!("invalid lambda selection `{s}`"));
    if let Some((a, b)) = s.split_once(':') {
        let a: u32 = a.trim().parse().map_err(|_| bad())?;
        let b: u32 = b.trim().parse().map_err(|_| bad())?;
        if a > b {
            return Err(bad());
        }
        return Ok((a..=b).collect());
    }
    s.split(',').map(|t| t.trim().parse().map_err(|_| bad())).collect()
}

/// `3/2`, `-1/2`, `1.5` or `2`.
pub fn parse_half_int(s: &str) -> Result<HalfInt, CliError> {
    let bad = || CliError::Usage(format!("invalid half-integer `{s}`"));
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: i32 = n.trim().parse().map_err(|_| bad())?;
        return match d.trim() {
            "2" => Ok(HalfInt::from_twice(n)),
            "1" => Ok(HalfInt::from_int(n)),
            _ => Err(bad()),
        };
    }
    let x: f64 = s.parse().map_err(|_| bad())?;
    let twice = 2.0 * x;
    if twice.fract() != 0.0 || twice.abs() > f64::from(i32::MAX) {
        return Err(bad());
    }
    Ok(HalfInt::from_twice(twice as i32))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        assert_eq!(parse_tau_grid("-0.3,0,0.1,0.5").unwrap(), vec![-0.3, 0.0, 0.1, 0.5]);
        assert_eq!(parse_tau_grid("0:1:3").unwrap(), vec![0.0, 0.5, 1.0]);
        assert_eq!(parse_tau_grid("0.2:9:1").unwrap(), vec![0.2]);
        assert!(parse_tau_grid("0:1:0").is_err());
        assert!(parse_tau_grid("a").is_err());
        assert!(parse_tau_grid("inf").is_err());
    }

    #[test]
    fn lambdas() {
        assert_eq!(parse_lambdas("4").unwrap(), vec![4]);
        assert_eq!(parse_lambdas("1, 3").unwrap(), vec![1, 3]);
        assert_eq!(parse_lambdas("2:4").unwrap(), vec![2, 3, 4]);
        assert!(parse_lambdas("4:2").is_err());
        assert!(parse_lambdas("-1").is_err());
    }

    #[test]
    fn half_ints() {
        assert_eq!(parse_half_int("3/2").unwrap(), HalfInt::from_twice(3));
        assert_eq!(parse_half_int("-1/2").unwrap(), HalfInt::from_twice(-1));
        assert_eq!(parse_half_int("1.5").unwrap(), HalfInt::from_twice(3));
        assert_eq!(parse_half_int("2").unwrap(), HalfInt::from_int(2));
        assert!(parse_half_int("1/3").is_err());
        assert!(parse_half_int("0.25").is_err());
    }
}
