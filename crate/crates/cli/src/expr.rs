//! Linear class expressions such as `H1 - 2*F` or `1/2*E1 + E2`.

use enriques_core::{AmbientModel, BigInt, BigRational, CurveConfig, DivClass};
use num_traits::{One, Zero};

use crate::CliError;

pub type Terms = Vec<(BigRational, String)>;

pub fn parse_expression(src: &str) -> Result<Terms, CliError> {
    let bad = |msg: &str| CliError::Usage(format!("class expression `{src}`: {msg}"));
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0;
    let mut out = Vec::new();
    let skip_ws = |i: &mut usize| {
        while *i < chars.len() && chars[*i].is_whitespace() {
            *i += 1;
        }
    };
    let number = |i: &mut usize| -> Option<BigInt> {
        let start = *i;
        while *i < chars.len() && chars[*i].is_ascii_digit() {
            *i += 1;
        }
        (start < *i).then(|| chars[start..*i].iter().collect::<String>().parse().expect("digits"))
    };
    loop {
        skip_ws(&mut i);
        let mut sign = BigRational::one();
        if i < chars.len() && (chars[i] == '+' || chars[i] == '-') {
            if chars[i] == '-' {
                sign = -sign;
            }
            i += 1;
            skip_ws(&mut i);
        } else if !out.is_empty() {
            return Err(bad("expected `+` or `-`"));
        }
        let mut coeff = BigRational::one();
        if let Some(num) = number(&mut i) {
            let mut q = BigRational::from_integer(num);
            skip_ws(&mut i);
            if i < chars.len() && chars[i] == '/' {
                i += 1;
                skip_ws(&mut i);
                let den = number(&mut i).ok_or_else(|| bad("expected a denominator"))?;
                if den.is_zero() {
                    return Err(bad("zero denominator"));
                }
                q /= BigRational::from_integer(den);
            }
            skip_ws(&mut i);
            if i < chars.len() && chars[i] == '*' {
                i += 1;
                skip_ws(&mut i);
            }
            coeff = q;
        }
        let start = i;
        while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
            i += 1;
        }
        if start == i {
            return Err(bad("expected a class name"));
        }
        out.push((sign * coeff, chars[start..i].iter().collect()));
        skip_ws(&mut i);
        if i == chars.len() {
            return Ok(out);
        }
    }
}

/// Ambient class of an expression.
pub fn evaluate(terms: &Terms, model: &AmbientModel) -> Result<DivClass, CliError> {
    let mut acc = DivClass::zero(model.rank());
    for (q, name) in terms {
        acc = acc.add_scaled(q, &model.class_of(name)?);
    }
    Ok(acc)
}

/// Coefficients over the curves of an expression.
pub fn curve_coefficients(terms: &Terms, config: &CurveConfig) -> Result<Vec<BigRational>, CliError> {
    let mut acc = vec![BigRational::zero(); config.curves().len()];
    for (q, name) in terms {
        let v = config
            .coefficients_of(name)
            .ok_or_else(|| CliError::Core(enriques_core::Error::UnknownName(name.clone())))?;
        acc.iter_mut().zip(v).for_each(|(a, b)| *a += q * b);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn parses_linear_combinations() {
        let t = parse_expression("H1 - 2*F + 1/2 E3").unwrap();
        assert_eq!(t, vec![(r(1, 1), "H1".into()), (r(-2, 1), "F".into()), (r(1, 2), "E3".into())]);
        assert_eq!(parse_expression("-R1_1").unwrap(), vec![(r(-1, 1), "R1_1".into())]);
        assert!(parse_expression("H1 F").is_err());
        assert!(parse_expression("1/0*A").is_err());
        assert!(parse_expression("").is_err());
    }
}
