//! Golden reference values for the two certification tables, used by the
//! `tables` command and the regression suite.

/// Unimodality ranges: (chi, kappa lower coefficient, kappa upper
/// coefficient), both as multiples of n^2 at granularity 1e-6. The
/// landscape is also unimodal with optimum 1.6 for every cutoff beyond the
/// last row's upper bound.
pub const TABLE1: [(f64, f64, f64); 15] = [
    (3.0, 0.000030, 0.225138),
    (2.9, 0.225628, 0.241246),
    (2.8, 0.241720, 0.259143),
    (2.7, 0.259600, 0.279105),
    (2.6, 0.279545, 0.301461),
    (2.5, 0.301885, 0.326611),
    (2.4, 0.327018, 0.355040),
    (2.3, 0.355431, 0.387346),
    (2.2, 0.387720, 0.424266),
    (2.1, 0.424623, 0.466723),
    (2.0, 0.467064, 0.515884),
    (1.9, 0.516208, 0.573238),
    (1.8, 0.573546, 0.640714),
    (1.7, 0.641006, 0.720843),
    (1.6, 0.721118, 0.772075),
];

/// Remains-ahead table rows: leading rate a (in tenths), first trailing
/// rate b of the row (in tenths), then the scaled Q values (Q * 1e5, one
/// decimal) for consecutive b. Rows with a <= 1.6 trail to the left
/// (b < a); rows with a >= 1.6 trail to the right (b > a).
struct Table2Row {
    a_tenths: u32,
    first_b_tenths: u32,
    values: &'static [f64],
}

#[rustfmt::skip]
const TABLE2_ROWS: [Table2Row; 29] = [
    Table2Row { a_tenths: 2, first_b_tenths: 1, values: &[0.0] },
    Table2Row { a_tenths: 3, first_b_tenths: 1, values: &[0.0, 0.2] },
    Table2Row { a_tenths: 4, first_b_tenths: 1, values: &[0.0, 0.1, 0.4] },
    Table2Row { a_tenths: 5, first_b_tenths: 1, values: &[0.0, 0.1, 0.2, 0.4] },
    Table2Row { a_tenths: 6, first_b_tenths: 1, values: &[0.0, 0.1, 0.2, 0.3, 0.8] },
    Table2Row { a_tenths: 7, first_b_tenths: 1, values: &[0.0, 0.1, 0.1, 0.3, 0.5, 1.1] },
    Table2Row { a_tenths: 8, first_b_tenths: 1, values: &[0.0, 0.1, 0.2, 0.3, 0.5, 0.9, 2.2] },
    Table2Row { a_tenths: 9, first_b_tenths: 1, values: &[0.0, 0.1, 0.2, 0.3, 0.4, 0.7, 1.2, 2.9] },
    Table2Row { a_tenths: 10, first_b_tenths: 1, values: &[0.1, 0.1, 0.2, 0.3, 0.5, 0.8, 1.3, 2.2, 5.2] },
    Table2Row { a_tenths: 11, first_b_tenths: 1, values: &[0.1, 0.1, 0.2, 0.3, 0.5, 0.8, 1.1, 1.8, 3.1, 7.3] },
    Table2Row { a_tenths: 12, first_b_tenths: 1, values: &[0.1, 0.2, 0.3, 0.4, 0.6, 0.9, 1.3, 2.0, 3.1, 5.5, 12.9] },
    Table2Row { a_tenths: 13, first_b_tenths: 1, values: &[0.1, 0.1, 0.3, 0.4, 0.6, 0.8, 1.2, 1.7, 2.6, 4.1, 7.3, 17.5] },
    Table2Row { a_tenths: 14, first_b_tenths: 1, values: &[0.1, 0.2, 0.3, 0.4, 0.7, 0.9, 1.3, 1.8, 2.7, 4.0, 6.5, 12.0, 30.1] },
    Table2Row { a_tenths: 15, first_b_tenths: 1, values: &[0.1, 0.2, 0.4, 0.6, 0.9, 1.3, 1.8, 2.5, 3.6, 5.3, 8.3, 14.0, 27.8, 78.0] },
    Table2Row { a_tenths: 16, first_b_tenths: 1, values: &[0.1, 0.3, 0.4, 0.7, 1.0, 1.4, 2.0, 2.7, 3.9, 5.7, 8.8, 14.5, 27.4, 65.9, 294.9] },
    Table2Row { a_tenths: 16, first_b_tenths: 17, values: &[245.3, 67.0, 31.3, 18.3, 12.1, 8.7, 6.6, 5.2, 4.2, 3.5, 2.9, 2.5, 2.2, 1.9] },
    Table2Row { a_tenths: 17, first_b_tenths: 18, values: &[95.3, 37.1, 20.5, 13.2, 9.3, 7.0, 5.5, 4.4, 3.6, 3.1, 2.6, 2.3, 2.0] },
    Table2Row { a_tenths: 18, first_b_tenths: 19, values: &[69.8, 29.9, 17.6, 11.8, 8.6, 6.6, 5.3, 4.3, 3.6, 3.1, 2.7, 2.4] },
    Table2Row { a_tenths: 19, first_b_tenths: 20, values: &[52.0, 23.3, 14.2, 9.8, 7.3, 5.7, 4.6, 3.8, 3.2, 2.8, 2.4] },
    Table2Row { a_tenths: 20, first_b_tenths: 21, values: &[46.6, 21.4, 13.3, 9.3, 7.0, 5.6, 4.5, 3.8, 3.2, 2.8] },
    Table2Row { a_tenths: 21, first_b_tenths: 22, values: &[49.0, 22.9, 14.4, 10.2, 7.8, 6.2, 5.1, 4.3, 3.7] },
    Table2Row { a_tenths: 22, first_b_tenths: 23, values: &[43.4, 20.5, 13.0, 9.3, 7.2, 5.7, 4.7, 4.0] },
    Table2Row { a_tenths: 23, first_b_tenths: 24, values: &[42.8, 20.4, 13.0, 9.4, 7.2, 5.8, 4.8] },
    Table2Row { a_tenths: 24, first_b_tenths: 25, values: &[42.2, 20.3, 13.0, 9.4, 7.3, 5.9] },
    Table2Row { a_tenths: 25, first_b_tenths: 26, values: &[42.6, 20.5, 13.3, 9.6, 7.5] },
    Table2Row { a_tenths: 26, first_b_tenths: 27, values: &[44.8, 21.7, 14.1, 10.3] },
    Table2Row { a_tenths: 27, first_b_tenths: 28, values: &[43.6, 21.2, 13.8] },
    Table2Row { a_tenths: 28, first_b_tenths: 29, values: &[45.9, 22.4] },
    Table2Row { a_tenths: 29, first_b_tenths: 30, values: &[46.0] },
];

/// All (a, b, scaled Q) reference entries, 225 in total.
pub fn table2_entries() -> Vec<(f64, f64, f64)> {
    let mut out = Vec::with_capacity(225);
    for row in &TABLE2_ROWS {
        for (k, &v) in row.values.iter().enumerate() {
            out.push((
                row.a_tenths as f64 / 10.0,
                (row.first_b_tenths as usize + k) as f64 / 10.0,
                v,
            ));
        }
    }
    out
}

/// Reference scaled Q for a single pair, if tabulated.
pub fn table2_lookup(a: f64, b: f64) -> Option<f64> {
    let at = (a * 10.0).round() as u32;
    let bt = (b * 10.0).round() as u32;
    TABLE2_ROWS.iter().find_map(|row| {
        if row.a_tenths != at {
            return None;
        }
        let idx = bt.checked_sub(row.first_b_tenths)? as usize;
        row.values.get(idx).copied()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_shapes() {
        assert_eq!(TABLE1.len(), 15);
        let entries = table2_entries();
        assert_eq!(entries.len(), 225);
        // every entry pairs distinct rates on the same side of 1.6
        for (a, b, v) in entries {
            assert!(a != b);
            assert!((a <= 1.6 && b < a) || (a >= 1.6 && b > a));
            assert!(v < 100_000.0);
        }
    }

    #[test]
    fn lookup_matches_rows() {
        assert_eq!(table2_lookup(1.6, 1.5), Some(294.9));
        assert_eq!(table2_lookup(1.6, 1.7), Some(245.3));
        assert_eq!(table2_lookup(2.9, 3.0), Some(46.0));
        assert_eq!(table2_lookup(0.2, 0.1), Some(0.0));
        assert_eq!(table2_lookup(1.5, 1.6), None);
        assert_eq!(table2_lookup(1.6, 1.6), None);
    }
}
