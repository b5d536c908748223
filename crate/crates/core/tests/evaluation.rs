use cmsf_core::evaluation::{FrameMask, RunningMean};
use cmsf_core::{evaluate_sequence, frame_fscore, mask_iou, BinaryMask, CmsfError};
use proptest::prelude::*;

/// Counts-based scorer with the same degenerate conventions, written from scratch.
fn oracle(p: &BinaryMask, g: &BinaryMask, beta_sq: f64) -> (f64, f64, f64, f64) {
    let (mut tp, mut fp, mut fnn) = (0.0, 0.0, 0.0);
    for y in 0..p.height() {
        for x in 0..p.width() {
            match (p.get(x, y), g.get(x, y)) {
                (true, true) => tp += 1.0,
                (true, false) => fp += 1.0,
                (false, true) => fnn += 1.0,
                _ => {}
            }
        }
    }
    let union: f64 = tp + fp + fnn;
    if union == 0.0 {
        return (1.0, 1.0, 1.0, 1.0);
    }
    let iou = tp / union;
    let prec = if tp + fp == 0.0 { 1.0 } else { tp / (tp + fp) };
    let rec = if tp + fnn == 0.0 { 1.0 } else { tp / (tp + fnn) };
    let f = if tp == 0.0 {
        0.0
    } else {
        (1.0 + beta_sq) * prec * rec / (beta_sq * prec + rec)
    };
    (iou, prec, rec, f)
}

fn arb_pair() -> impl Strategy<Value = (BinaryMask, BinaryMask)> {
    (1..=12u32, 1..=12u32, 0.0..1.0f64, 0.0..1.0f64).prop_flat_map(|(w, h, d1, d2)| {
        let n = (w * h) as usize;
        (
            prop::collection::vec(prop::bool::weighted(d1), n),
            prop::collection::vec(prop::bool::weighted(d2), n),
        )
            .prop_map(move |(a, b)| {
                (
                    BinaryMask::from_pixels(w, h, a).unwrap(),
                    BinaryMask::from_pixels(w, h, b).unwrap(),
                )
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn frame_metrics_match_oracle((p, g) in arb_pair(), beta_sq in 0.1..2.0f64) {
        let (iou, prec, rec, f) = oracle(&p, &g, beta_sq);
        let s = frame_fscore(&p, &g, beta_sq).unwrap();
        prop_assert!((mask_iou(&p, &g).unwrap() - iou).abs() < 1e-12);
        prop_assert!((s.precision - prec).abs() < 1e-12);
        prop_assert!((s.recall - rec).abs() < 1e-12);
        prop_assert!((s.f - f).abs() < 1e-12);
        prop_assert!((0.0..=1.0).contains(&s.f));
    }

    #[test]
    fn sequence_mean_is_permutation_invariant(
        pairs in prop::collection::vec((any::<u16>(), any::<u16>()), 1..8),
        rot in 0usize..8,
    ) {
        let m = |bits: u16| BinaryMask::from_fn(4, 4, |x, y| bits >> (y * 4 + x) & 1 == 1);
        let preds: Vec<_> = pairs.iter().enumerate().map(|(i, (p, _))| FrameMask::new(format!("v/{i}"), m(*p))).collect();
        let gts: Vec<_> = pairs.iter().enumerate().map(|(i, (_, g))| FrameMask::new(format!("v/{i}"), m(*g))).collect();
        let r = evaluate_sequence(&preds, &gts, 0.3).unwrap();

        let k = rot % preds.len();
        let mut p2 = preds.clone();
        let mut g2 = gts.clone();
        p2.rotate_left(k);
        g2.rotate_left(k);
        let r2 = evaluate_sequence(&p2, &g2, 0.3).unwrap();
        prop_assert!((r.m_iou - r2.m_iou).abs() < 1e-12);
        prop_assert!((r.f_score - r2.f_score).abs() < 1e-12);
        for pf in &r2.per_frame {
            prop_assert!(r.per_frame.contains(pf));
        }

        let mut rm_i = RunningMean::default();
        let mut rm_f = RunningMean::default();
        for pf in &r.per_frame {
            rm_i.push(pf.iou);
            rm_f.push(pf.f);
        }
        prop_assert!((rm_i.mean().unwrap() - r.m_iou).abs() < 1e-12);
        prop_assert!((rm_f.mean().unwrap() - r.f_score).abs() < 1e-12);
    }
}

#[test]
fn exhaustive_three_by_three_corners() {
    // Every empty/full/single-pixel combination on a 3x3 grid.
    let mut masks = vec![BinaryMask::empty(3, 3), BinaryMask::full(3, 3)];
    for i in 0..9 {
        masks.push(BinaryMask::from_fn(3, 3, |x, y| y * 3 + x == i));
    }
    for p in &masks {
        for g in &masks {
            let (iou, prec, rec, f) = oracle(p, g, 0.3);
            let s = frame_fscore(p, g, 0.3).unwrap();
            assert_eq!(mask_iou(p, g).unwrap(), iou);
            assert_eq!((s.precision, s.recall), (prec, rec));
            assert!((s.f - f).abs() < 1e-15);
        }
    }
}

fn rows(r0: u32, r1: u32) -> BinaryMask {
    BinaryMask::from_fn(224, 224, |_, y| y >= r0 && y < r1)
}

/// Ten hand-computed frames: mIoU 1/2 and F-score 54/95.
#[test]
fn hand_computed_sequence() {
    let empty = BinaryMask::empty(224, 224);
    let full = rows(0, 224);
    let cases = [
        (full.clone(), full.clone()),
        (rows(0, 100), rows(0, 100)),
        (rows(10, 20), rows(10, 20)),
        (empty.clone(), rows(0, 50)),
        (rows(0, 50), empty.clone()),
        (rows(0, 28), rows(0, 84)),
        (rows(56, 168), rows(0, 112)),
        (rows(56, 168), rows(0, 112)),
        (empty.clone(), empty.clone()),
        (rows(0, 10), rows(100, 110)),
    ];
    let preds: Vec<_> = cases.iter().enumerate().map(|(i, (p, _))| FrameMask::new(format!("v/{i}"), p.clone())).collect();
    let gts: Vec<_> = cases.iter().enumerate().map(|(i, (_, g))| FrameMask::new(format!("v/{i}"), g.clone())).collect();
    let r = evaluate_sequence(&preds, &gts, 0.3).unwrap();
    assert!((r.per_frame[5].f - 13.0 / 19.0).abs() < 1e-12);
    assert!((r.per_frame[6].iou - 1.0 / 3.0).abs() < 1e-12);
    assert!((r.per_frame[6].f - 0.5).abs() < 1e-12);
    assert!((r.m_iou - 0.5).abs() < 1e-12);
    assert!((r.f_score - 54.0 / 95.0).abs() < 1e-12);
}

#[test]
fn shape_mismatch_is_alignment_error() {
    let preds = vec![FrameMask::new("v/1", BinaryMask::empty(4, 4))];
    let gts = vec![FrameMask::new("v/1", BinaryMask::empty(4, 5))];
    assert!(matches!(evaluate_sequence(&preds, &gts, 0.3), Err(CmsfError::Alignment(_))));
}
