//! Zero-temperature imaginary-time integrals
//! `I_n = int_0^beta d tau_1 .. d tau_n exp(-sum_{i<j} Omega_ij |tau_i - tau_j|)`.
//!
//! Only the coefficient of `beta` survives `beta -> infinity`; every function
//! here returns that coefficient. Rates are listed in the lexicographic pair
//! order `Omega_12, .., Omega_1n, Omega_23, .., Omega_2n, ..`.

use rug::ops::Pow;
use rug::Float;

use crate::error::{Error, Result};
use crate::precision::BigReal;

/// One evaluated integral with its arguments.
#[derive(Debug, Clone)]
pub struct ImaginaryTimeIntegral {
    pub n: usize,
    pub rates: Vec<BigReal>,
    pub value_per_beta: BigReal,
}

/// Number of pair rates of an `n`-time integral.
pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

fn positive(integral: &'static str, factor: &str, value: Float) -> Result<Float> {
    if value > 0 {
        Ok(value)
    } else {
        Err(Error::VanishingDenominator {
            integral,
            factor: factor.to_string(),
        })
    }
}

/// `I_2(a) = 2 / a`.
pub fn i2(a: &BigReal) -> Result<BigReal> {
    let a = positive("I_2", "Omega_12", a.clone())?;
    Ok(Float::with_val(a.prec(), 2u32) / a)
}

/// `I_3 = 4 (a + b + c) / ((a + b)(a + c)(b + c))` with `(a, b, c) = (Omega_12, Omega_13, Omega_23)`.
pub fn i3(a: &BigReal, b: &BigReal, c: &BigReal) -> Result<BigReal> {
    let ab = positive("I_3", "Omega_12 + Omega_13", a.clone() + b)?;
    let ac = positive("I_3", "Omega_12 + Omega_23", a.clone() + c)?;
    let bc = positive("I_3", "Omega_13 + Omega_23", b.clone() + c)?;
    let sum = a.clone() + b + c;
    Ok(sum * 4u32 / (ab * ac * bc))
}

/// Closed form of `I_4` from its six rates.
pub fn i4(r: &[BigReal; 6]) -> Result<BigReal> {
    let [o12, o13, o14, o23, o24, o34] = r;
    let s = |name: &'static str, parts: &[&BigReal]| -> Result<Float> {
        let mut acc = Float::new(o12.prec());
        for p in parts {
            acc += *p;
        }
        positive("I_4", name, acc)
    };
    // Cuts isolating one time.
    let c1 = s("Omega_12 + Omega_13 + Omega_14", &[o12, o13, o14])?;
    let c2 = s("Omega_12 + Omega_23 + Omega_24", &[o12, o23, o24])?;
    let c3 = s("Omega_13 + Omega_23 + Omega_34", &[o13, o23, o34])?;
    let c4 = s("Omega_14 + Omega_24 + Omega_34", &[o14, o24, o34])?;
    // Cuts splitting the times into two pairs.
    let p12 = s("Omega_13 + Omega_14 + Omega_23 + Omega_24", &[o13, o14, o23, o24])?;
    let p13 = s("Omega_12 + Omega_14 + Omega_23 + Omega_34", &[o12, o14, o23, o34])?;
    let p14 = s("Omega_12 + Omega_13 + Omega_24 + Omega_34", &[o12, o13, o24, o34])?;
    let inv = |x: &Float| Float::with_val(x.prec(), x.recip_ref());
    let t1 = inv(&p14) * (inv(&c1) + inv(&c4)) * (inv(&c2) + inv(&c3));
    let t2 = inv(&p13) * (inv(&c2) + inv(&c4)) * (inv(&c1) + inv(&c3));
    let t3 = inv(&p12) * (inv(&c3) + inv(&c4)) * (inv(&c1) + inv(&c2));
    Ok((t1 + t2 + t3) * 2u32)
}

/// Rates of the five-time configuration `I_5(Om, Om, Omt, 0, Om, 0, Omt, Om, Om, Om)`.
pub fn i5_rates(omega: &BigReal, omega_tilde: &BigReal) -> Vec<BigReal> {
    let z = Float::new(omega.prec());
    let (o, t) = (omega.clone(), omega_tilde.clone());
    vec![o.clone(), o.clone(), t.clone(), z.clone(), o.clone(), z, t, o.clone(), o.clone(), o]
}

/// Rates of the six-time configuration
/// `I_6(Om, Om, Omt, 0, 0, Om, 0, Omt, 0, 0, 0, Omt, Om, Om, Om)`.
pub fn i6_rates(omega: &BigReal, omega_tilde: &BigReal) -> Vec<BigReal> {
    let z = Float::new(omega.prec());
    let (o, t) = (omega.clone(), omega_tilde.clone());
    vec![
        o.clone(),
        o.clone(),
        t.clone(),
        z.clone(),
        z.clone(),
        o.clone(),
        z.clone(),
        t.clone(),
        z.clone(),
        z.clone(),
        z,
        t,
        o.clone(),
        o.clone(),
        o,
    ]
}

fn check_frequencies(integral: &'static str, omega: &BigReal, omega_tilde: &BigReal) -> Result<()> {
    positive(integral, "Omega", omega.clone())?;
    positive(integral, "Omega_tilde", omega_tilde.clone())?;
    Ok(())
}

/// Powers `x^0 .. x^5`, used by the quintic numerators.
fn powers(x: &BigReal) -> [Float; 6] {
    let mut p: [Float; 6] = std::array::from_fn(|_| Float::with_val(x.prec(), 1u32));
    for i in 1..6 {
        p[i] = p[i - 1].clone() * x;
    }
    p
}

/// `sum_i coeffs[i] t^(5-i) o^i`.
fn quintic(coeffs: [u32; 6], t: &[Float; 6], o: &[Float; 6]) -> Float {
    let mut acc = Float::new(t[0].prec());
    for (i, c) in coeffs.iter().enumerate() {
        acc += t[5 - i].clone() * &o[i] * *c;
    }
    acc
}

/// Shared denominator factors `(t + o), (t + 2o), (t + 4o)`.
fn shifted(omega: &BigReal, omega_tilde: &BigReal) -> (Float, Float, Float) {
    let one = omega_tilde.clone() + omega;
    let two = omega_tilde.clone() + Float::with_val(omega.prec(), omega * 2u32);
    let four = omega_tilde.clone() + Float::with_val(omega.prec(), omega * 4u32);
    (one, two, four)
}

/// Closed form of the five-time configuration of [`i5_rates`].
pub fn i5_configuration(omega: &BigReal, omega_tilde: &BigReal) -> Result<BigReal> {
    check_frequencies("I_5", omega, omega_tilde)?;
    let (t, o) = (powers(omega_tilde), powers(omega));
    let num = quintic([3, 42, 227, 568, 656, 288], &t, &o);
    let (one, two, four) = shifted(omega, omega_tilde);
    let den = o[2].clone() * 2u32 * one.square() * two.pow(4u32) * four;
    Ok(num / den)
}

/// Closed form of the six-time configuration of [`i6_rates`].
pub fn i6_configuration(omega: &BigReal, omega_tilde: &BigReal) -> Result<BigReal> {
    check_frequencies("I_6", omega, omega_tilde)?;
    let (t, o) = (powers(omega_tilde), powers(omega));
    let num = quintic([1, 14, 73, 160, 136, 32], &t, &o) * 3u32;
    let (one, two, four) = shifted(omega, omega_tilde);
    let den = t[1].clone() * &o[2] * one.square() * two.pow(4u32) * four;
    Ok(num / den)
}

/// `integral_In(n, rates)` for the general closed forms `n = 2, 3, 4`.
pub fn integral_in(n: usize, rates: &[BigReal]) -> Result<ImaginaryTimeIntegral> {
    if !(2..=4).contains(&n) {
        return Err(Error::InvalidArgument(format!("general closed forms exist for n = 2, 3, 4; got n = {n}")));
    }
    if rates.len() != pair_count(n) {
        return Err(Error::InvalidArgument(format!("I_{n} takes {} rates, got {}", pair_count(n), rates.len())));
    }
    let value_per_beta = match n {
        2 => i2(&rates[0])?,
        3 => i3(&rates[0], &rates[1], &rates[2])?,
        _ => {
            let r: [BigReal; 6] = std::array::from_fn(|i| rates[i].clone());
            i4(&r)?
        }
    };
    Ok(ImaginaryTimeIntegral {
        n,
        rates: rates.to_vec(),
        value_per_beta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::precision::Precision;

    #[test]
    fn i2_value() {
        let p = Precision::digits(40);
        let v = i2(&p.float(3)).unwrap();
        assert!(Float::with_val(p.bits(), &v - Float::with_val(p.bits(), 2) / 3u32).abs() < p.epsilon());
    }

    #[test]
    fn i3_equal_rates() {
        let p = Precision::digits(40);
        let a = p.float(1.7);
        let v = i3(&a, &a, &a).unwrap();
        let want = Float::with_val(p.bits(), 1.5) / Float::with_val(p.bits(), a.square_ref());
        assert!(Float::with_val(p.bits(), &v - &want).abs() < p.epsilon());
    }

    #[test]
    fn vanishing_denominators_are_named() {
        let p = Precision::digits(40);
        let z = p.zero();
        match i3(&z, &z, &p.float(1)) {
            Err(Error::VanishingDenominator { integral, factor }) => {
                assert_eq!(integral, "I_3");
                assert_eq!(factor, "Omega_12 + Omega_13");
            }
            other => panic!("{other:?}"),
        }
        assert!(i5_configuration(&p.float(1), &z).is_err());
        assert!(integral_in(5, &[]).is_err());
        assert!(integral_in(3, &[p.float(1)]).is_err());
    }
}
