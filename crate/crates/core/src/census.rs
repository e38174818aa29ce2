//! Closed-form predictions for the involution class graphs — class sizes,
//! diameters, and (in dimension four) the full distance census together with
//! its refinement by overlap dimension — plus itemized verification reports
//! comparing those predictions against exact breadth-first searches.
//!
//! Every count here is an exact polynomial in the field size `q`, evaluated
//! in 128-bit integers; divisions by two are checked to be exact before they
//! happen, and products that would overflow report `None` rather than wrap.
//!
//! ```
//! use cigraph::census::{class_size, predicted_diameter, verify_class};
//! use cigraph::gf::field;
//! use cigraph::involutions::{ClassSpec, DEFAULT_CLASS_CAP};
//!
//! let f = field(3, 1)?;
//! let spec = ClassSpec::new(&f, 4, 1)?;
//! assert_eq!(class_size(&spec), Some(1080));
//! assert_eq!(predicted_diameter(&spec), Some(2));
//!
//! // Run the breadth-first search and compare it item by item.
//! let report = verify_class(&spec, DEFAULT_CLASS_CAP)?;
//! assert!(report.passed());
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

use std::collections::BTreeMap;
use std::fmt::Display;

use crate::gf::Field;
use crate::graph::{bfs_census, GraphError};
use crate::involutions::{canonical_t, ClassSpec};

/// Order of the general linear group of degree `n` over the field, or `None`
/// if the product overflows 128 bits.
pub fn gl_order(field: &Field, n: usize) -> Option<u128> {
    gl_order_q(field.order() as u128, n)
}

fn gl_order_q(q: u128, n: usize) -> Option<u128> {
    let qn = q.checked_pow(u32::try_from(n).ok()?)?;
    let mut order: u128 = 1;
    let mut qi: u128 = 1;
    for _ in 0..n {
        order = order.checked_mul(qn - qi)?;
        qi = qi.checked_mul(q)?;
    }
    Some(order)
}

/// Number of members of the class: the index of the centralizer of the
/// canonical representative.  In odd characteristic the centralizer is the
/// product of the general linear groups acting on the two eigenspaces; in
/// characteristic two it is the full stabilizer of the rank-`k` unipotent
/// pattern.  `None` means the intermediate products overflow 128 bits.
pub fn class_size(spec: &ClassSpec) -> Option<u128> {
    let q = spec.field().order() as u128;
    let (n, k) = (spec.n(), spec.k());
    let group = gl_order_q(q, n)?;
    let centralizer = if spec.char_two() {
        q.checked_pow(u32::try_from(k * (2 * n - 3 * k)).ok()?)?
            .checked_mul(gl_order_q(q, k)?)?
            .checked_mul(gl_order_q(q, n - 2 * k)?)?
    } else {
        gl_order_q(q, k)?.checked_mul(gl_order_q(q, n - k)?)?
    };
    debug_assert_eq!(group % centralizer, 0);
    Some(group / centralizer)
}

/// Predicted diameter of the class graph, defined for dimension at least
/// three (the graph is connected there).  The value depends only on how the
/// rank `k` — or its mirror `n - k` — compares with `n/4` and `n/2`, except
/// on the boundary `n = 2k` with odd `k`, where the two characteristics
/// genuinely differ.
pub fn predicted_diameter(spec: &ClassSpec) -> Option<u32> {
    let (n, k) = (spec.n(), spec.k());
    if n < 3 {
        return None;
    }
    let j = k.min(n - k);
    Some(if 4 * j <= n {
        2
    } else if n != 2 * k || k % 2 == 0 {
        3
    } else if spec.char_two() {
        4
    } else {
        3
    })
}

/// Predicted diameter of the union graph over all proper involution classes.
/// Known exactly in characteristic two for dimension at least three.
pub fn predicted_all_involutions_diameter(field: &Field, n: usize) -> Option<u32> {
    if field.has_char_two() && n >= 3 {
        Some(3)
    } else {
        None
    }
}

fn nonneg(value: i128) -> u128 {
    u128::try_from(value).expect("count polynomial is nonnegative at prime powers")
}

fn half(value: i128) -> u128 {
    assert_eq!(value % 2, 0, "count polynomial is even at odd prime powers");
    nonneg(value / 2)
}

/// Exact distance census for the four-dimensional class graphs: number of
/// class members at each distance from a fixed member.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShellPrediction {
    /// Count at each distance, starting with the single member at distance 0.
    pub counts: BTreeMap<u32, u128>,
    pub diameter: u32,
}

/// Closed-form distance census, available for every class in dimension four.
pub fn predicted_shells(spec: &ClassSpec) -> Option<ShellPrediction> {
    if spec.n() != 4 {
        return None;
    }
    let q = spec.field().order() as i128;
    let shells: Vec<u128> = match (spec.k(), spec.char_two()) {
        (1, true) => vec![
            1,
            nonneg(q.pow(4) + 2 * q.pow(3) - q * q - q - 2),
            nonneg(q.pow(6) + q.pow(5) - 2 * q.pow(3)),
        ],
        (1, false) | (3, false) => vec![
            1,
            nonneg(q.pow(4) + q.pow(3) + q * q),
            nonneg(q.pow(6) + q.pow(5) - q * q - 1),
        ],
        (2, true) => vec![
            1,
            nonneg(2 * q.pow(4) - q.pow(3) - 2 * q * q + q - 1),
            nonneg(q * q * (q.pow(5) + q.pow(4) - q.pow(3) - 4 * q * q + q + 2)),
            nonneg(q.pow(4) * (q.pow(4) - q.pow(3) - q * q + 1)),
        ],
        (2, false) => vec![
            1,
            nonneg(q * q * (q + 1) * (q + 1) + 1),
            half((q - 1) * (q + 1)
                * (q.pow(6) + 3 * q.pow(5) + q.pow(4) + 3 * q.pow(3) + 8 * q * q + 4 * q + 4)),
            half(q * (q - 1) * (q - 1) * (q + 1) * (q.pow(4) + 5 * q * q + 6 * q + 4)),
        ],
        _ => return None,
    };
    Some(ShellPrediction {
        diameter: (shells.len() - 1) as u32,
        counts: shells
            .into_iter()
            .enumerate()
            .map(|(d, c)| (d as u32, c))
            .collect(),
    })
}

/// Refinement of the four-dimensional rank-two census by the overlap
/// `dim([V,x] ∩ [V,t])`: sizes of the three overlap classes (excluding the
/// base member itself) and the count in each (distance, overlap) cell.
/// Cells that are empty are omitted from the map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OverlapPrediction {
    /// Members with overlap 0, 1, 2 respectively, the base member excluded.
    pub u_sizes: [u128; 3],
    /// Nonzero counts at each (distance, overlap) pair, distances 1 to 3.
    pub cells: BTreeMap<(u32, usize), u128>,
}

/// Closed-form overlap refinement, available for the rank-two class in
/// dimension four.
pub fn predicted_overlap(spec: &ClassSpec) -> Option<OverlapPrediction> {
    if spec.n() != 4 || spec.k() != 2 {
        return None;
    }
    let q = spec.field().order() as i128;
    let (u_sizes, raw_cells): ([u128; 3], Vec<((u32, usize), u128)>) = if spec.char_two() {
        let u2 = nonneg((q * q - 1) * (q * q - q) - 1);
        (
            [
                nonneg(q.pow(4) * (q * q - 1) * (q * q - q)),
                nonneg((q * q - 1) * (q * q - 1) * (q * q + q.pow(3))),
                u2,
            ],
            vec![
                ((1, 1), nonneg(q * q * (q * q - 1))),
                ((1, 2), u2),
                ((2, 0), nonneg(q.pow(6) * (q - 1))),
                ((2, 1), nonneg(q * q * (q * q - 1) * (2 * q * q - q - 2))),
                ((3, 0), nonneg(q.pow(5) * (q - 1) * (q * q - q - 1))),
                ((3, 1), nonneg(q.pow(4) * (q.pow(3) - q * q - q + 1))),
            ],
        )
    } else {
        let u2 = nonneg(q.pow(4) - 1);
        (
            [
                nonneg(q.pow(8)),
                nonneg(q.pow(5) * (q + 1) * (q + 1)),
                u2,
            ],
            vec![
                ((1, 0), 1),
                ((1, 1), nonneg(q * q * (q + 1) * (q + 1))),
                ((2, 0), half((q - 1) * (q + 1) * (q + 1) * (q.pow(5) - q.pow(3) + 2 * q * q + 2))),
                ((2, 1), nonneg(q * (q + 1) * (q + 1) * (q - 1) * (q.pow(3) + q + 1))),
                ((2, 2), u2),
                ((3, 0), half(q * (q - 1) * (q - 1) * (q + 1) * (q.pow(4) + 3 * q * q + 2 * q + 2))),
                ((3, 1), nonneg(q * (q + 1).pow(3) * (q - 1) * (q - 1))),
            ],
        )
    };
    Some(OverlapPrediction {
        u_sizes,
        cells: raw_cells.into_iter().filter(|&(_, c)| c > 0).collect(),
    })
}

/// One comparison between a predicted and an observed quantity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyItem {
    pub label: String,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
}

/// Itemized comparison of every closed form available for a class against
/// the exact breadth-first census.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerifyReport {
    pub items: Vec<VerifyItem>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.items.iter().all(|item| item.pass)
    }

    fn check<E: Display, A: Display + PartialEq<E>>(&mut self, label: &str, expected: E, actual: A) {
        let pass = actual == expected;
        self.items.push(VerifyItem {
            label: label.to_string(),
            expected: expected.to_string(),
            actual: actual.to_string(),
            pass,
        });
    }
}

/// Runs the breadth-first census of the class graph and compares every
/// applicable closed form: connectivity, class size, diameter, and — in
/// dimension four — the distance shells and the overlap refinement.
pub fn verify_class(spec: &ClassSpec, cap: usize) -> Result<VerifyReport, GraphError> {
    let with_cells = predicted_overlap(spec).is_some();
    let census = bfs_census(spec, &canonical_t(spec), with_cells, cap)?;
    let mut report = VerifyReport::default();
    report.check("connected", true, census.connected());
    if let Some(size) = class_size(spec) {
        report.check("class size", size, census.vertex_count() as u128);
    }
    if let Some(diameter) = predicted_diameter(spec) {
        report.check("diameter", diameter, census.eccentricity);
    }
    if let Some(shells) = predicted_shells(spec) {
        for (d, expected) in &shells.counts {
            let observed = census.counts.get(d).copied().unwrap_or(0) as u128;
            report.check(&format!("members at distance {d}"), *expected, observed);
        }
        report.check(
            "no members beyond the last predicted shell",
            0u128,
            census
                .counts
                .iter()
                .filter(|(d, _)| !shells.counts.contains_key(d))
                .map(|(_, c)| *c as u128)
                .sum::<u128>(),
        );
    }
    if let Some(overlap) = predicted_overlap(spec) {
        let cells = census.cells.as_ref().expect("census ran with cells");
        for (i, expected) in overlap.u_sizes.iter().enumerate() {
            let observed: u128 = cells
                .iter()
                .filter(|&(&(d, m), _)| d > 0 && m == i)
                .map(|(_, c)| *c as u128)
                .sum();
            report.check(&format!("members with overlap {i}"), *expected, observed);
        }
        let observed_cells: BTreeMap<(u32, usize), u128> = cells
            .iter()
            .filter(|&(&(d, _), &c)| d > 0 && c > 0)
            .map(|(&key, &c)| (key, c as u128))
            .collect();
        for (&(d, m), expected) in &overlap.cells {
            let observed = observed_cells.get(&(d, m)).copied().unwrap_or(0);
            report.check(
                &format!("members at distance {d} with overlap {m}"),
                *expected,
                observed,
            );
        }
        report.check(
            "no members in unpredicted cells",
            0u128,
            observed_cells
                .iter()
                .filter(|(key, _)| !overlap.cells.contains_key(key))
                .map(|(_, c)| *c)
                .sum::<u128>(),
        );
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::field;

    fn spec(p: u16, e: u32, n: usize, k: usize) -> ClassSpec {
        ClassSpec::new(&field(p, e).unwrap(), n, k).unwrap()
    }

    #[test]
    fn class_sizes_match_known_orders() {
        assert_eq!(class_size(&spec(2, 1, 3, 1)), Some(21));
        assert_eq!(class_size(&spec(2, 1, 4, 1)), Some(105));
        assert_eq!(class_size(&spec(2, 1, 4, 2)), Some(210));
        assert_eq!(class_size(&spec(2, 1, 5, 2)), Some(6510));
        assert_eq!(class_size(&spec(2, 1, 6, 3)), Some(234360));
        assert_eq!(class_size(&spec(3, 1, 3, 1)), Some(117));
        assert_eq!(class_size(&spec(3, 1, 3, 2)), Some(117));
        assert_eq!(class_size(&spec(3, 1, 4, 1)), Some(1080));
        assert_eq!(class_size(&spec(3, 1, 4, 2)), Some(10530));
        assert_eq!(class_size(&spec(3, 1, 5, 2)), Some(882090));
        assert_eq!(class_size(&spec(2, 2, 4, 1)), Some(5355));
        assert_eq!(class_size(&spec(2, 2, 4, 2)), Some(64260));
    }

    #[test]
    fn class_sizes_match_enumeration() {
        use crate::involutions::enumerate_class;
        for s in [
            spec(2, 1, 3, 1),
            spec(2, 1, 4, 2),
            spec(2, 1, 5, 2),
            spec(3, 1, 3, 1),
            spec(3, 1, 3, 2),
            spec(5, 1, 2, 1),
        ] {
            let enumerated = enumerate_class(&s, 1_000_000).unwrap().len() as u128;
            assert_eq!(class_size(&s), Some(enumerated), "{s:?}");
        }
    }

    #[test]
    fn overflow_reports_none() {
        let f16 = field(2, 4).unwrap();
        assert_eq!(gl_order(&f16, 8), None);
        assert!(gl_order(&f16, 4).is_some());
    }

    #[test]
    fn diameter_prediction_follows_the_rank_ratio() {
        assert_eq!(predicted_diameter(&spec(2, 1, 4, 1)), Some(2));
        assert_eq!(predicted_diameter(&spec(3, 1, 4, 1)), Some(2));
        assert_eq!(predicted_diameter(&spec(3, 1, 4, 3)), Some(2));
        assert_eq!(predicted_diameter(&spec(2, 1, 4, 2)), Some(3));
        assert_eq!(predicted_diameter(&spec(3, 1, 4, 2)), Some(3));
        assert_eq!(predicted_diameter(&spec(2, 1, 5, 2)), Some(3));
        assert_eq!(predicted_diameter(&spec(2, 1, 6, 3)), Some(4));
        assert_eq!(predicted_diameter(&spec(3, 1, 6, 3)), Some(3));
        assert_eq!(predicted_diameter(&spec(2, 1, 8, 2)), Some(2));
        assert_eq!(predicted_diameter(&spec(3, 1, 8, 6)), Some(2));
        assert_eq!(predicted_diameter(&spec(2, 1, 8, 4)), Some(3));
        assert_eq!(predicted_diameter(&spec(3, 1, 2, 1)), None);
        assert_eq!(predicted_all_involutions_diameter(&field(2, 1).unwrap(), 4), Some(3));
        assert_eq!(predicted_all_involutions_diameter(&field(3, 1).unwrap(), 3), None);
    }

    #[test]
    fn frozen_shell_values_at_small_field_sizes() {
        let shells = predicted_shells(&spec(2, 1, 4, 1)).unwrap();
        assert_eq!(
            shells.counts,
            BTreeMap::from([(0, 1), (1, 24), (2, 80)])
        );
        let shells = predicted_shells(&spec(2, 1, 4, 2)).unwrap();
        assert_eq!(
            shells.counts,
            BTreeMap::from([(0, 1), (1, 17), (2, 112), (3, 80)])
        );
        let shells = predicted_shells(&spec(3, 1, 4, 1)).unwrap();
        assert_eq!(
            shells.counts,
            BTreeMap::from([(0, 1), (1, 117), (2, 962)])
        );
        assert_eq!(
            predicted_shells(&spec(3, 1, 4, 3)).unwrap(),
            predicted_shells(&spec(3, 1, 4, 1)).unwrap()
        );
        let shells = predicted_shells(&spec(3, 1, 4, 2)).unwrap();
        assert_eq!(
            shells.counts,
            BTreeMap::from([(0, 1), (1, 145), (2, 6832), (3, 3552)])
        );

        let overlap = predicted_overlap(&spec(2, 1, 4, 2)).unwrap();
        assert_eq!(overlap.u_sizes, [96, 108, 5]);
        assert_eq!(
            overlap.cells,
            BTreeMap::from([
                ((1, 1), 12),
                ((1, 2), 5),
                ((2, 0), 64),
                ((2, 1), 48),
                ((3, 0), 32),
                ((3, 1), 48),
            ])
        );
        let overlap = predicted_overlap(&spec(3, 1, 4, 2)).unwrap();
        assert_eq!(overlap.u_sizes, [6561, 3888, 80]);
        assert_eq!(
            overlap.cells,
            BTreeMap::from([
                ((1, 0), 1),
                ((1, 1), 144),
                ((2, 0), 3776),
                ((2, 1), 2976),
                ((2, 2), 80),
                ((3, 0), 2784),
                ((3, 1), 768),
            ])
        );
        assert_eq!(predicted_shells(&spec(2, 1, 5, 2)), None);
        assert_eq!(predicted_overlap(&spec(2, 1, 4, 1)), None);
    }

    #[test]
    fn closed_forms_satisfy_partition_identities() {
        let fields = [
            (2, 1),
            (2, 2),
            (2, 3),
            (2, 4),
            (3, 1),
            (3, 2),
            (5, 1),
            (7, 1),
            (11, 1),
            (13, 1),
        ];
        for &(p, e) in &fields {
            let ks: &[usize] = if p == 2 { &[1, 2] } else { &[1, 2, 3] };
            for &k in ks {
                let s = spec(p, e, 4, k);
                let shells = predicted_shells(&s).unwrap();
                let total: u128 = shells.counts.values().sum();
                assert_eq!(Some(total), class_size(&s), "shells partition {s:?}");
                assert_eq!(
                    Some(shells.diameter),
                    predicted_diameter(&s),
                    "diameter consistent {s:?}"
                );
                if k == 2 {
                    let overlap = predicted_overlap(&s).unwrap();
                    let u_total: u128 = overlap.u_sizes.iter().sum();
                    assert_eq!(Some(u_total + 1), class_size(&s), "overlaps partition {s:?}");
                    for d in 1..=3u32 {
                        let row: u128 = overlap
                            .cells
                            .iter()
                            .filter(|&(&(dd, _), _)| dd == d)
                            .map(|(_, c)| c)
                            .sum();
                        assert_eq!(Some(&row), shells.counts.get(&d), "row sum d={d} {s:?}");
                    }
                    for i in 0..3usize {
                        let column: u128 = overlap
                            .cells
                            .iter()
                            .filter(|&(&(_, m), _)| m == i)
                            .map(|(_, c)| c)
                            .sum();
                        assert_eq!(column, overlap.u_sizes[i], "column sum i={i} {s:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn verification_reports_pass_against_exact_censuses() {
        for s in [
            spec(2, 1, 4, 1),
            spec(2, 1, 4, 2),
            spec(3, 1, 4, 1),
            spec(3, 1, 4, 2),
            spec(3, 1, 3, 1),
            spec(3, 1, 3, 2),
        ] {
            let report = verify_class(&s, 1_000_000).unwrap();
            assert!(
                report.passed(),
                "failed items: {:?}",
                report
                    .items
                    .iter()
                    .filter(|i| !i.pass)
                    .collect::<Vec<_>>()
            );
        }
    }
}
