use laguerre_core::polynomials::rational_to_f64;
use laguerre_core::{Complex64, EvolutionState};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Pow, Zero};

/// A time given on the command line, kept exactly as typed.
#[derive(Debug, Clone, PartialEq)]
pub struct Time {
    pub exact: BigRational,
    pub value: f64,
}

fn parse_decimal(s: &str) -> Option<BigRational> {
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (sign, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let whole: BigInt = format!("0{int}{frac}").parse().ok()?;
    let shift = exponent - frac.len() as i32;
    let ten = BigInt::from(10);
    let value = if shift >= 0 {
        BigRational::from_integer(whole * Pow::pow(&ten, shift as u32))
    } else {
        BigRational::new(whole, Pow::pow(&ten, (-shift) as u32))
    };
    Some(value * BigInt::from(sign))
}

/// A decimal such as `0.25` or `-3e-1`, or a fraction `p/q`.
pub fn parse_time(s: &str) -> Result<Time, String> {
    let s = s.trim();
    let exact = match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| format!("bad numerator in {s:?}"))?;
            let q: BigInt = q.trim().parse().map_err(|_| format!("bad denominator in {s:?}"))?;
            if q.is_zero() {
                return Err(format!("zero denominator in {s:?}"));
            }
            BigRational::new(p, q)
        }
        None => parse_decimal(s).ok_or_else(|| format!("not a number: {s:?}"))?,
    };
    let value = rational_to_f64(&exact);
    Ok(Time { exact, value })
}

fn parse_real(s: &str) -> Result<f64, String> {
    s.parse::<f64>().map_err(|_| format!("not a number: {s:?}"))
}

fn parse_imaginary(s: &str) -> Result<f64, String> {
    match s {
        "" | "+" => Ok(1.0),
        "-" => Ok(-1.0),
        _ => parse_real(s),
    }
}

/// `a`, `bi`, `a+bi` or `a-bi`.
pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let Some(body) = s.strip_suffix(['i', 'j']) else {
        return Ok(Complex64::new(parse_real(&s)?, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    match split {
        Some(k) => Ok(Complex64::new(parse_real(&body[..k])?, parse_imaginary(&body[k..])?)),
        None => Ok(Complex64::new(0.0, parse_imaginary(body)?)),
    }
}

/// `delta<k>` or a comma-separated list of complex amplitudes.
pub fn parse_state(s: &str) -> Result<EvolutionState, String> {
    if let Some(k) = s.strip_prefix("delta") {
        let k: usize = k.parse().map_err(|_| format!("bad site in {s:?}"))?;
        return Ok(EvolutionState::delta(k, k + 1));
    }
    let amps = s.split(',').map(parse_complex).collect::<Result<Vec<_>, _>>()?;
    Ok(EvolutionState::new(amps, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use laguerre_core::kernel::rational;

    #[test]
    fn times_are_exact() {
        assert_eq!(parse_time("0.25").unwrap().exact, rational(1, 4));
        assert_eq!(parse_time("1/4").unwrap().exact, rational(1, 4));
        assert_eq!(parse_time("-3e-1").unwrap().exact, rational(-3, 10));
        assert_eq!(parse_time("2.5E1").unwrap().exact, rational(25, 1));
        assert_eq!(parse_time(".5").unwrap().value, 0.5);
        assert_eq!(parse_time("0.1").unwrap().value, 0.1);
        for bad in ["", ".", "1/0", "abc", "1e", "--1"] {
            assert!(parse_time(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn complex_forms() {
        let c = Complex64::new;
        assert_eq!(parse_complex("-1").unwrap(), c(-1.0, 0.0));
        assert_eq!(parse_complex("1+2i").unwrap(), c(1.0, 2.0));
        assert_eq!(parse_complex("1-i").unwrap(), c(1.0, -1.0));
        assert_eq!(parse_complex("-0.5i").unwrap(), c(0.0, -0.5));
        assert_eq!(parse_complex("i").unwrap(), c(0.0, 1.0));
        assert_eq!(parse_complex("1e-3-2e+2i").unwrap(), c(1e-3, -200.0));
        assert_eq!(parse_complex(" 2 + 3i ").unwrap(), c(2.0, 3.0));
        assert!(parse_complex("1+2").is_err());
        assert!(parse_complex("x").is_err());
    }

    #[test]
    fn states() {
        assert_eq!(parse_state("delta0").unwrap(), EvolutionState::delta(0, 1));
        assert_eq!(parse_state("delta3").unwrap().dim(), 4);
        let s = parse_state("1,0.5i,-0.25").unwrap();
        assert_eq!(s.amplitudes()[1], Complex64::new(0.0, 0.5));
        assert!(parse_state("deltax").is_err());
    }
}
