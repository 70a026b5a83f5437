//! Genus and stable-genus bounds for a high-distance `n`-bridge knot.
//!
//! Everything here is arithmetic in `(n, d)`. Half the distance is taken as
//! `floor(d / 2)`; `d` is an integer path length and the floor is the weaker
//! of the two readings.

use num_bigint::BigUint;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::params::BridgeParams;

/// Exact `a choose b`.
pub fn binomial(a: u64, b: u64) -> Result<BigUint> {
    if b > a {
        return Err(Error::InvalidParameter(format!(
            "binomial({a}, {b}) needs b <= a"
        )));
    }
    let b = b.min(a - b);
    let mut acc = BigUint::from(1u32);
    for k in 0..b {
        // Each prefix product is itself a binomial coefficient, so the
        // division is exact.
        acc = acc * (a - k) / (k + 1);
    }
    Ok(acc)
}

/// Serialize as a JSON number when it fits in `u64`, else as a decimal string.
pub fn serialize_big<S: Serializer>(value: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    match u64::try_from(value) {
        Ok(v) => s.serialize_u64(v),
        Err(_) => s.serialize_str(&value.to_string()),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StableGenusReport {
    pub n: u32,
    pub d: Option<u64>,
    pub hypothesis_d_gt_2n: bool,
    pub hypothesis_d_ge_4n: bool,
    pub heegaard_genus: u32,
    #[serde(serialize_with = "serialize_big")]
    pub surface_count_upper: BigUint,
    pub same_side_stable_genus_upper: u32,
    pub cross_side_stable_genus_lower: Option<u64>,
}

/// `min(2n - 1, floor(d / 2))`.
pub fn cross_side_lower(n: u32, d: u64) -> u64 {
    (2 * u64::from(n) - 1).min(d / 2)
}

/// Evaluate the main bounds. The report is produced for every input; the
/// hypothesis flags say whether the bounds actually apply (`n >= 3`).
pub fn stable_genus_report(params: &BridgeParams) -> StableGenusReport {
    let n = params.n();
    let applies = n >= 3;
    StableGenusReport {
        n,
        d: params.d(),
        hypothesis_d_gt_2n: applies && params.d_exceeds_2n(),
        hypothesis_d_ge_4n: applies && params.d_at_least_4n(),
        heegaard_genus: n,
        surface_count_upper: binomial(2 * u64::from(n), u64::from(n)).expect("n <= 2n"),
        same_side_stable_genus_upper: n + 1,
        cross_side_stable_genus_lower: params.d().map(|d| cross_side_lower(n, d)),
    }
}

/// Euler characteristic of the `2n`-punctured bridge sphere.
pub fn punctured_sphere_euler(n: u32) -> i64 {
    2 - 2 * i64::from(n)
}

/// Smallest genus `g` with `2 - 2g <= 2 χ(S)`, i.e. `2n - 1`.
pub fn euler_genus_floor(n: u32) -> Result<u32> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "bridge number must be positive".into(),
        ));
    }
    let bound = 2 * punctured_sphere_euler(n);
    // 2 - 2g <= bound  <=>  g >= (2 - bound) / 2; bound is even.
    let g = (2 - bound) / 2;
    debug_assert!(2 - 2 * g <= bound && 2 - 2 * (g - 1) > bound);
    Ok(g as u32)
}

#[derive(Debug, Serialize)]
struct CsvRow {
    n: u32,
    d: Option<u64>,
    genus: u32,
    count: String,
    same_side_upper: u32,
    cross_side_lower: Option<u64>,
    d_gt_2n: bool,
    d_ge_4n: bool,
}

/// CSV table, one row per report, with a header line.
pub fn reports_to_csv(reports: &[StableGenusReport]) -> Result<String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for r in reports {
        writer
            .serialize(CsvRow {
                n: r.n,
                d: r.d,
                genus: r.heegaard_genus,
                count: r.surface_count_upper.to_string(),
                same_side_upper: r.same_side_stable_genus_upper,
                cross_side_lower: r.cross_side_stable_genus_lower,
                d_gt_2n: r.hypothesis_d_gt_2n,
                d_ge_4n: r.hypothesis_d_ge_4n,
            })
            .map_err(|e| Error::InternalConsistency(e.to_string()))?;
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| Error::InternalConsistency(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Pascal's triangle, as an independent route to the coefficients.
    fn pascal(rows: usize) -> Vec<Vec<BigUint>> {
        let mut tri: Vec<Vec<BigUint>> = vec![vec![BigUint::from(1u32)]];
        for a in 1..=rows {
            let prev = &tri[a - 1];
            let mut row = vec![BigUint::from(1u32); a + 1];
            for b in 1..a {
                row[b] = &prev[b - 1] + &prev[b];
            }
            tri.push(row);
        }
        tri
    }

    #[test]
    fn binomial_matches_pascal() {
        let tri = pascal(40);
        for a in 0..=40u64 {
            for b in 0..=a {
                assert_eq!(
                    binomial(a, b).unwrap(),
                    tri[a as usize][b as usize],
                    "({a},{b})"
                );
            }
        }
        assert_eq!(tri[6][3], BigUint::from(20u32));
        assert_eq!(tri[14][7], BigUint::from(3432u32));
        assert_eq!(tri[20][10], BigUint::from(184756u32));
        assert!(binomial(3, 4).is_err());
    }

    #[test]
    fn binomial_large() {
        let big = binomial(200, 100).unwrap();
        assert!(u64::try_from(&big).is_err());
        // C(200,101) = C(200,100) * 100 / 101
        assert_eq!(
            &big * BigUint::from(100u32),
            binomial(200, 101).unwrap() * BigUint::from(101u32)
        );
    }

    #[test]
    fn report_examples() {
        let r = stable_genus_report(&BridgeParams::with_distance(3, 7).unwrap());
        assert_eq!(r.heegaard_genus, 3);
        assert_eq!(r.surface_count_upper, BigUint::from(20u32));
        assert_eq!(r.same_side_stable_genus_upper, 4);
        assert_eq!(r.cross_side_stable_genus_lower, Some(3));
        assert!(r.hypothesis_d_gt_2n && !r.hypothesis_d_ge_4n);

        let r = stable_genus_report(&BridgeParams::with_distance(3, 12).unwrap());
        assert_eq!(r.cross_side_stable_genus_lower, Some(5));
        assert!(r.hypothesis_d_gt_2n && r.hypothesis_d_ge_4n);

        let r = stable_genus_report(&BridgeParams::new(5).unwrap());
        assert_eq!(r.cross_side_stable_genus_lower, None);
        assert!(!r.hypothesis_d_gt_2n && !r.hypothesis_d_ge_4n);

        // The bounds need n >= 3; the report still comes back.
        let r = stable_genus_report(&BridgeParams::with_distance(2, 100).unwrap());
        assert!(!r.hypothesis_d_gt_2n && !r.hypothesis_d_ge_4n);
        assert_eq!(r.cross_side_stable_genus_lower, Some(3));
    }

    #[test]
    fn cross_side_monotone_and_saturating() {
        for n in 2..=12u32 {
            let cap = 2 * u64::from(n) - 1;
            let mut last = 0;
            for d in 0..=10 * u64::from(n) {
                let v = cross_side_lower(n, d);
                assert!(v >= last);
                assert!(v <= cap);
                last = v;
                assert_eq!(v == cap, d >= 4 * u64::from(n) - 2, "n={n} d={d}");
                let p = BridgeParams::with_distance(n, d).unwrap();
                if p.d_at_least_4n() {
                    assert_eq!(v, cap);
                }
            }
        }
    }

    #[test]
    fn euler_chain() {
        for n in 1..=20u32 {
            let g = euler_genus_floor(n).unwrap();
            assert_eq!(g, 2 * n - 1);
            let chi_sigma = |g: u32| 2 - 2 * i64::from(g);
            let chi_s = punctured_sphere_euler(n);
            assert!(chi_sigma(g) <= 2 * chi_s);
            assert!(chi_sigma(g - 1) > 2 * chi_s || g == 0);
            assert_eq!(2 * chi_s, 4 - 4 * i64::from(n));
        }
        assert_eq!(euler_genus_floor(3).unwrap(), 5);
        assert_eq!(euler_genus_floor(1).unwrap(), 1);
        assert_eq!(euler_genus_floor(7).unwrap(), 13);
        assert!(euler_genus_floor(0).is_err());
    }

    #[test]
    fn serialization_is_stable() {
        let r = stable_genus_report(&BridgeParams::with_distance(3, 12).unwrap());
        let json = serde_json::to_string(&r).unwrap();
        assert_eq!(
            json,
            r#"{"n":3,"d":12,"hypothesis_d_gt_2n":true,"hypothesis_d_ge_4n":true,"heegaard_genus":3,"surface_count_upper":20,"same_side_stable_genus_upper":4,"cross_side_stable_genus_lower":5}"#
        );
        let csv = reports_to_csv(&[r]).unwrap();
        assert_eq!(
            csv,
            "n,d,genus,count,same_side_upper,cross_side_lower,d_gt_2n,d_ge_4n\n3,12,3,20,4,5,true,true\n"
        );
        let absent =
            reports_to_csv(&[stable_genus_report(&BridgeParams::new(4).unwrap())]).unwrap();
        assert!(absent.ends_with("4,,4,70,5,,false,false\n"));
    }
}
