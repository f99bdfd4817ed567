mod common;

use common::*;

#[test]
fn x1_golden_values() {
    if let Err(why) = criterion_x1_golden() {
        panic!("{why}");
    }
}

#[test]
fn reducible_fixtures_have_invariant_witnesses() {
    if let Err(why) = criterion_negatives() {
        panic!("{why}");
    }
}

#[test]
fn bracket_oracles_agree_on_known_values() {
    use num_bigint::BigInt;
    use num_rational::BigRational;
    let two = BigRational::from_integer(BigInt::from(2));
    assert_eq!(bracket_oracle_q(1, 1, 1, &two), BigRational::new(BigInt::from(9), BigInt::from(7)));
    // 9/7 mod 10007 is 9 · 7⁻¹
    let seventh = (1..P).find(|x| x * 7 % P == 1).unwrap();
    assert_eq!(bracket_oracle_p(1, 1, 1, 2, P), 9 * seventh % P);
}
