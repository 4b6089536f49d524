use std::path::Path;

use proptest::prelude::*;

use canopy_metrics::geometry::{ca_to_cd, cd_to_ca, Mask, Point, RasterSpec, TreeRecord};
use canopy_metrics::heatmap::{encode, nms_peaks, pixel_grid, separate_instances, zncc, Heatmap, SigmaOfCd};
use canopy_metrics::io::{read_trees, write_trees};
use canopy_metrics::matching::{hungarian, match_trees, CostMatrix, CostParams, Scheme};
use canopy_metrics::metrics::{agreement_analysis, balanced_f1};

fn trees(max: usize, side: f64) -> impl Strategy<Value = Vec<TreeRecord>> {
    prop::collection::vec((0.0..side, 0.0..side, 0.5f64..12.0), 0..max).prop_map(|v| {
        v.into_iter()
            .map(|(x, y, cd)| TreeRecord::new("p", Point::new(x, y), cd_to_ca(cd).unwrap()).unwrap())
            .collect()
    })
}

fn cost_matrix() -> impl Strategy<Value = CostMatrix> {
    (1usize..=5, 1usize..=5).prop_flat_map(|(n, m)| {
        prop::collection::vec(prop::option::weighted(0.8, 0u32..256), n * m)
            .prop_map(move |v| CostMatrix::new(n, m, v.into_iter().map(|c| c.map(|k| k as f64 / 256.0)).collect()).unwrap())
    })
}

// (feasible pairs, cost) of the lexicographic optimum by exhaustive search
fn brute(c: &CostMatrix, row: usize, used: &mut Vec<bool>) -> (usize, f64) {
    if row == c.rows() {
        return (0, 0.0);
    }
    let mut best = brute(c, row + 1, used);
    for col in 0..c.cols() {
        if let (false, Some(v)) = (used[col], c.get(row, col)) {
            used[col] = true;
            let (n, s) = brute(c, row + 1, used);
            used[col] = false;
            if n + 1 > best.0 || (n + 1 == best.0 && s + v < best.1) {
                best = (n + 1, s + v);
            }
        }
    }
    best
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn hungarian_is_lexicographically_optimal(c in cost_matrix()) {
        let a = hungarian(&c);
        let mut used = vec![false; c.cols()];
        prop_assert_eq!((a.len(), a.total_cost(&c)), brute(&c, 0, &mut used));
    }

    #[test]
    fn balanced_f1_lies_between_its_parts(f_mo in 0.0f64..=1.0, f_om in 0.0f64..=1.0, n in 1usize..500, m in 1usize..500) {
        let b = balanced_f1(f_mo, f_om, n, m).unwrap();
        prop_assert!(b >= f_mo.min(f_om) - 1e-12 && b <= f_mo.max(f_om) + 1e-12);
    }

    #[test]
    fn one_to_one_counts_ignore_a_common_scale(t in trees(8, 40.0), p in trees(8, 40.0), s in 0.1f64..10.0) {
        // without the area term the cost is a pure distance, so scaling preserves the assignment
        let params = CostParams::new(0.0, 1.0).unwrap();
        let scale = |v: &[TreeRecord]| -> Vec<TreeRecord> {
            v.iter()
                .map(|t| TreeRecord::new("p", Point::new(t.center().x * s, t.center().y * s), t.crown_area() * s * s).unwrap())
                .collect()
        };
        let a = match_trees(&t, &p, &params, Scheme::OneToOne, 1);
        let b = match_trees(&scale(&t), &scale(&p), &params, Scheme::OneToOne, 1);
        prop_assert_eq!((a.tp, a.fp, a.fn_), (b.tp, b.fp, b.fn_));
    }

    #[test]
    fn agreement_percentages_sum_to_100(a in trees(10, 30.0), b in trees(10, 30.0)) {
        let t = agreement_analysis(&a, &b, &CostParams::with_gamma(1.0).unwrap(), 10);
        let rows = t.rows();
        if !rows.is_empty() {
            let sum: f64 = rows.iter().map(|r| r.percent).sum();
            prop_assert!((sum - 100.0).abs() < 1e-9);
        }
    }

    #[test]
    fn encoding_ignores_tree_order(t in trees(8, 20.0), seed in any::<u64>()) {
        let spec = pixel_grid(100, 100, 0.2).unwrap();
        let mut shuffled = t.clone();
        let k = shuffled.len().max(1);
        shuffled.rotate_left((seed as usize) % k);
        shuffled.reverse();
        let m = SigmaOfCd::default();
        prop_assert_eq!(encode(&t, &spec, &m, false).unwrap(), encode(&shuffled, &spec, &m, false).unwrap());
    }

    #[test]
    fn nms_commutes_with_a_constant_shift(
        v in prop::collection::vec(26u32..200, 30 * 20),
        shift in 0u32..50,
        thr in 26u32..200,
    ) {
        // dyadic values keep the f32 shift exact
        let q = |k: u32| k as f32 / 256.0;
        let hm = Heatmap::from_data(pixel_grid(30, 20, 1.0).unwrap(), v.iter().map(|&k| q(k)).collect()).unwrap();
        let at = |h: &Heatmap, t: f64| nms_peaks(h, 5, t).into_iter().map(|p| (p.col, p.row)).collect::<Vec<_>>();
        prop_assert_eq!(at(&hm, q(thr) as f64), at(&hm.shifted(q(shift)), q(thr + shift) as f64));
    }

    #[test]
    fn zncc_is_affine_invariant(a in prop::collection::vec(-5.0f64..5.0, 9..40), scale in 0.1f64..10.0, offset in -3.0f64..3.0) {
        let b: Vec<f64> = a.iter().map(|v| scale * v + offset).collect();
        if let Some(r) = zncc(&a, &b) {
            prop_assert!((r - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn separation_conserves_pixels(bits in prop::collection::vec(prop::bool::weighted(0.6), 24 * 18)) {
        let mask = Mask::from_data(RasterSpec::new(24, 18, 1.0, Point::default()).unwrap(), bits).unwrap();
        let inst = separate_instances(&mask, 5, 7, "p").unwrap();
        let labelled = inst.labels.iter().zip(mask.data()).all(|(&l, &m)| (l > 0) == m);
        prop_assert!(labelled);
        let area: f64 = inst.trees.iter().map(TreeRecord::crown_area).sum();
        prop_assert_eq!(area, mask.count() as f64);
    }

    #[test]
    fn tree_table_round_trip(t in trees(12, 1e4)) {
        let mut buf = Vec::new();
        write_trees(&mut buf, &t).unwrap();
        let back: Vec<TreeRecord> = read_trees(buf.as_slice(), Path::new("mem")).unwrap().into_values().flatten().collect();
        prop_assert_eq!(back, t);
    }

    #[test]
    fn diameter_area_round_trip(x in 1e-6f64..1e6) {
        let back = cd_to_ca(ca_to_cd(x).unwrap()).unwrap();
        prop_assert!((back - x).abs() <= 1e-12 * x);
    }
}
