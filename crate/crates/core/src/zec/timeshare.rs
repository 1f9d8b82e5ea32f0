use super::code::ZeCode;
use super::rate::{RatePoint, Source};
use super::ZecError;
use crate::mac::MacSpec;

/// Splits a 0-based message into `count` digits, most significant first.
fn digits(mut v: usize, base: usize, count: usize) -> Vec<usize> {
    let mut out = vec![0; count];
    for slot in out.iter_mut().rev() {
        *slot = v % base;
        v /= base;
    }
    out
}

fn checked_card(a: usize, j: usize, b: usize, k: usize) -> Result<usize, ZecError> {
    a.checked_pow(j as u32)
        .and_then(|x| b.checked_pow(k as u32).and_then(|y| x.checked_mul(y)))
        .ok_or_else(|| ZecError::Config("time-shared message cardinality overflows".into()))
}

/// Sends `j` blocks of code `a` followed by `k` blocks of code `b`.
///
/// Each message of the composite is the mixed-radix concatenation of the
/// sub-block messages (the `a` digits first, most significant first), so
/// the composite has cardinality `w_aʲ·w_bᵏ` and blocklength `j·n_a + k·n_b`,
/// and each sub-block is decoded on its own.
pub fn time_share(
    a: &ZeCode,
    b: &ZeCode,
    j: usize,
    k: usize,
    mac: &MacSpec,
) -> Result<(RatePoint, ZeCode), ZecError> {
    if j == 0 && k == 0 {
        return Err(ZecError::Config("time sharing needs at least one block".into()));
    }
    a.check_compatible(mac)?;
    b.check_compatible(mac)?;
    if a.users() != b.users() {
        return Err(ZecError::Config("codes have different numbers of users".into()));
    }
    if !a.channel().is_empty() && !b.channel().is_empty() && a.channel() != b.channel() {
        return Err(ZecError::Config("codes were built for different channels".into()));
    }
    if k == 0 && j == 1 {
        return Ok((RatePoint::from_code(a, Source::Code), a.clone()));
    }
    if j == 0 && k == 1 {
        return Ok((RatePoint::from_code(b, Source::Code), b.clone()));
    }
    let ca = a.cardinalities();
    let cb = b.cardinalities();
    let cards = ca
        .iter()
        .zip(cb)
        .map(|(&x, &y)| checked_card(x, j, y, k))
        .collect::<Result<Vec<_>, _>>()?;
    let n = j * a.blocklength() + k * b.blocklength();
    let code = ZeCode::from_fn(n, cards.clone(), mac.fingerprint(), |user, w0, wu| {
        let d0a = digits((w0 - 1) / cb[0].pow(k as u32), ca[0], j);
        let d0b = digits((w0 - 1) % cb[0].pow(k as u32), cb[0], k);
        let qb = cb[user + 1].pow(k as u32);
        let dua = digits((wu - 1) / qb, ca[user + 1], j);
        let dub = digits((wu - 1) % qb, cb[user + 1], k);
        let mut cw = Vec::with_capacity(n);
        for s in 0..j {
            cw.extend_from_slice(a.codeword(user, d0a[s] + 1, dua[s] + 1));
        }
        for s in 0..k {
            cw.extend_from_slice(b.codeword(user, d0b[s] + 1, dub[s] + 1));
        }
        cw
    })?;
    let point = RatePoint::new(n, cards.iter().map(|&c| c as u128).collect(), Source::Timeshare);
    Ok((point, code))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mac::fixtures::*;
    use crate::zec::is_zero_error;

    fn private_one() -> ZeCode {
        ZeCode::new(1, vec![1, 2, 1], vec![vec![vec![0], vec![1]], vec![vec![0]]], "").unwrap()
    }

    fn common() -> ZeCode {
        ZeCode::new(1, vec![2, 1, 1], vec![vec![vec![0], vec![1]], vec![vec![0], vec![1]]], "").unwrap()
    }

    #[test]
    fn half_and_half() {
        let adder = binary_adder();
        let (p, code) = time_share(&private_one(), &common(), 1, 1, &adder).unwrap();
        assert_eq!(p.blocklength, 2);
        assert_eq!(p.cardinalities, vec![2, 2, 1]);
        assert_eq!(p.rates(), vec![0.5, 0.5, 0.0]);
        assert!(is_zero_error(&code, &adder).unwrap());
    }

    #[test]
    fn identity_cases() {
        let adder = binary_adder();
        let a = private_one();
        let (p, code) = time_share(&a, &common(), 1, 0, &adder).unwrap();
        assert_eq!(code, a);
        assert_eq!(p.cardinalities, vec![1, 2, 1]);

        let (p, _) = time_share(&a, &a, 1, 1, &adder).unwrap();
        assert!(p.same_rates(&RatePoint::from_code(&a, Source::Code)));

        assert!(time_share(&a, &a, 0, 0, &adder).is_err());
    }

    #[test]
    fn different_channels_are_rejected() {
        let adder = binary_adder();
        let and = binary_and();
        let a = ZeCode::new(1, vec![1, 1, 1], vec![vec![vec![0]], vec![vec![0]]], adder.fingerprint()).unwrap();
        let b = ZeCode::new(1, vec![1, 1, 1], vec![vec![vec![0]], vec![vec![0]]], and.fingerprint()).unwrap();
        assert!(matches!(time_share(&a, &b, 1, 1, &adder), Err(ZecError::Config(_))));
    }
}
