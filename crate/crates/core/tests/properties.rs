//! Property-based checks of the module invariants.

mod common;

use proptest::prelude::*;

use steno_core::classify::{
    assign_cluster, Accuracy, ClusterLabel, DatasetProperties, Extent, Feature, FeatureGrades, Grade,
    TrendDirection,
};
use steno_core::loess::estimate_trend_loess;
use steno_core::metrics::{bottleneck_distance, dtw_distance, lp_norm, Norm};
use steno_core::noise::{inject_gaussian_noise, NoiseLevel};
use steno_core::periodicity::estimate_periodicity;
use steno_core::persistence::{persistence_diagram, PersistenceDiagram, PersistencePair};
use steno_core::plan::build_stimulus_plan;
use steno_core::resample::normalize_and_resample;
use steno_core::spectrum::{estimate_noise_fft_with, estimate_trend_fft_with, mid_band_fft, BandSplit};
use steno_core::stroke::{repair_temporal_order, CanvasSpec, StrokePoint, StrokeRecord};
use steno_core::TimeSeries;

use common::{bottleneck_by_enumeration, strictly_increasing};

fn ys_strategy(min: usize, max: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-100.0..100.0f64, min..=max)
}

fn uniform(ys: Vec<f64>) -> TimeSeries {
    let w = ys.len() as f64;
    TimeSeries::uniform(ys, w).unwrap()
}

fn stroke_strategy() -> impl Strategy<Value = StrokeRecord> {
    prop::collection::vec((0.0..950.0f64, 0.0..375.0f64), 2..200).prop_map(|pts| StrokeRecord {
        session: "p".into(),
        stimulus: "d".into(),
        canvas: CanvasSpec::default(),
        points: pts
            .into_iter()
            .enumerate()
            .map(|(i, (x, y))| StrokePoint::new(x, y, i as f64))
            .collect(),
    })
}

fn diagram_strategy() -> impl Strategy<Value = PersistenceDiagram> {
    prop::collection::vec((-5.0..5.0f64, 0.0..5.0f64), 0..=5).prop_map(|v| {
        PersistenceDiagram::from_pairs(v.into_iter().map(|(b, p)| PersistencePair::new(b, b + p)).collect())
    })
}

proptest! {
    #[test]
    fn repair_is_idempotent_and_monotone(stroke in stroke_strategy()) {
        let once = repair_temporal_order(&stroke).unwrap();
        let twice = repair_temporal_order(&once).unwrap();
        prop_assert_eq!(&once, &twice);
        let xs: Vec<f64> = once.points.iter().map(|p| p.x).collect();
        prop_assert!(strictly_increasing(&xs));
    }

    #[test]
    fn resample_is_uniform_and_centered(stroke in stroke_strategy(), n in 2usize..2000) {
        let s = repair_temporal_order(&stroke).unwrap().to_series().unwrap();
        let out = normalize_and_resample(&s, &stroke.canvas, n).unwrap();
        prop_assert_eq!(out.len(), n);
        prop_assert!(out.is_uniform());
        prop_assert!(strictly_increasing(out.xs()));
        let scale = out.ys().iter().fold(1.0_f64, |m, y| m.max(y.abs()));
        prop_assert!(out.mean().abs() < 1e-12 * scale * n as f64);
    }

    #[test]
    fn resample_at_own_length_only_centers(ys in ys_strategy(2, 500)) {
        let n = ys.len();
        let s = TimeSeries::uniform(ys.clone(), 950.0).unwrap();
        let out = normalize_and_resample(&s, &CanvasSpec::default(), n).unwrap();
        let mean = ys.iter().sum::<f64>() / n as f64;
        for (a, b) in out.ys().iter().zip(&ys) {
            prop_assert!((a - (b - mean)).abs() < 1e-9);
        }
    }

    #[test]
    fn injection_keeps_xs_and_is_seeded(ys in ys_strategy(2, 300), seed in any::<u64>()) {
        prop_assume!(ys.iter().any(|y| *y != ys[0]));
        let s = uniform(ys);
        for level in NoiseLevel::ALL {
            let a = inject_gaussian_noise(&s, level, seed).unwrap();
            prop_assert_eq!(a.xs(), s.xs());
            prop_assert_eq!(&a, &inject_gaussian_noise(&s, level, seed).unwrap());
            if level != NoiseLevel::None {
                prop_assert_ne!(&a, &inject_gaussian_noise(&s, level, seed ^ 1).unwrap());
            }
        }
    }

    #[test]
    fn spectral_bands_partition_the_series(ys in ys_strategy(2, 600)) {
        let s = uniform(ys);
        let split = BandSplit::default();
        let t = estimate_trend_fft_with(&s, &split).unwrap();
        let m = mid_band_fft(&s, &split).unwrap();
        let z = estimate_noise_fft_with(&s, &split).unwrap();
        for i in 0..s.len() {
            let sum = t.ys()[i] + m.ys()[i] + z.ys()[i];
            prop_assert!((sum - s.ys()[i]).abs() < 1e-9, "sample {}: {} vs {}", i, sum, s.ys()[i]);
            prop_assert_eq!(t.xs()[i], s.xs()[i]);
        }
    }

    #[test]
    fn persistence_counts_minima_and_ignores_reversal(ys in prop::collection::vec(0i32..30, 2..120)) {
        let ys: Vec<f64> = ys.into_iter().map(f64::from).collect();
        let below = |a: usize, b: usize| (ys[a], a) < (ys[b], b);
        let n = ys.len();
        let minima = (0..n)
            .filter(|&i| (i == 0 || below(i, i - 1)) && (i + 1 == n || below(i, i + 1)))
            .count();
        let d = persistence_diagram(&uniform(ys.clone()));
        prop_assert_eq!(d.len(), minima);
        prop_assert!(d.pairs().iter().all(|p| p.birth <= p.death));
        let mut rev = ys.clone();
        rev.reverse();
        let r = persistence_diagram(&uniform(rev));
        prop_assert!((d.total_persistence() - r.total_persistence()).abs() < 1e-9);
    }

    #[test]
    fn periodicity_amplitude_ignores_offset(ys in ys_strategy(4, 400), c in -1e3..1e3f64) {
        let s = uniform(ys.clone());
        let shifted = uniform(ys.iter().map(|y| y + c).collect());
        match (estimate_periodicity(&s).unwrap(), estimate_periodicity(&shifted).unwrap()) {
            (Some(a), Some(b)) => {
                prop_assert_eq!(a.period_count, b.period_count);
                prop_assert!((a.amplitude - b.amplitude).abs() < 1e-9 * (1.0 + a.amplitude + c.abs()));
            }
            (None, None) => {}
            (a, b) => prop_assert!(false, "{:?} vs {:?}", a.map(|p| p.amplitude), b.map(|p| p.amplitude)),
        }
    }

    #[test]
    fn loess_reproduces_lines(a in -10.0..10.0f64, b in -10.0..10.0f64, n in 3usize..200, span in 0.05..1.0f64) {
        prop_assume!((span * n as f64).ceil() >= 3.0);
        let s = uniform((0..n).map(|i| a + b * i as f64).collect());
        let out = estimate_trend_loess(&s, span).unwrap();
        for (y, want) in out.ys().iter().zip(s.ys()) {
            prop_assert!((y - want).abs() < 1e-8 * (1.0 + want.abs()));
        }
    }

    #[test]
    fn distances_are_symmetric_and_dtw_is_below_l1(a in ys_strategy(2, 60), b in ys_strategy(2, 60)) {
        let n = a.len().min(b.len());
        let (a, b) = (uniform(a[..n].to_vec()), uniform(b[..n].to_vec()));
        for p in [Norm::L1, Norm::L2, Norm::LInf] {
            prop_assert_eq!(lp_norm(&a, &b, p).unwrap(), lp_norm(&b, &a, p).unwrap());
            prop_assert_eq!(lp_norm(&a, &a, p).unwrap(), 0.0);
        }
        let d = dtw_distance(&a, &b);
        prop_assert!((d - dtw_distance(&b, &a)).abs() < 1e-9);
        prop_assert!(d <= lp_norm(&a, &b, Norm::L1).unwrap() + 1e-9);
        prop_assert_eq!(dtw_distance(&a, &a), 0.0);
    }

    #[test]
    fn lp_norms_ignore_a_common_shift(a in ys_strategy(2, 60), b in ys_strategy(2, 60), c in -50.0..50.0f64) {
        let n = a.len().min(b.len());
        let (a, b) = (a[..n].to_vec(), b[..n].to_vec());
        let shift = |v: &[f64]| uniform(v.iter().map(|y| y + c).collect());
        for p in [Norm::L1, Norm::L2, Norm::LInf] {
            let base = lp_norm(&uniform(a.clone()), &uniform(b.clone()), p).unwrap();
            let moved = lp_norm(&shift(&a), &shift(&b), p).unwrap();
            prop_assert!((base - moved).abs() < 1e-9 * (1.0 + base));
        }
    }

    #[test]
    fn bottleneck_is_a_metric(d1 in diagram_strategy(), d2 in diagram_strategy(), d3 in diagram_strategy()) {
        let ab = bottleneck_distance(&d1, &d2);
        let bc = bottleneck_distance(&d2, &d3);
        let ac = bottleneck_distance(&d1, &d3);
        prop_assert!((ab - bottleneck_by_enumeration(d1.pairs(), d2.pairs())).abs() < 1e-12);
        prop_assert!((ab - bottleneck_distance(&d2, &d1)).abs() < 1e-12);
        prop_assert!(ac <= ab + bc + 1e-12);
        prop_assert_eq!(bottleneck_distance(&d1, &d1), 0.0);
    }

    #[test]
    fn plans_are_deterministic(seed in any::<u64>(), participant in 0usize..1000) {
        let names: Vec<String> = (0..9).map(|i| format!("d{i}")).collect();
        prop_assert_eq!(
            build_stimulus_plan(&names, participant, seed).unwrap(),
            build_stimulus_plan(&names, participant, seed).unwrap()
        );
    }
}

const ACCURACY: [Grade; 3] = [
    Grade::Accuracy(Accuracy::VeryWell),
    Grade::Accuracy(Accuracy::Somewhat),
    Grade::Accuracy(Accuracy::NotAtAll),
];
const EXTENT: [Grade; 3] = [
    Grade::Extent(Extent::Most),
    Grade::Extent(Extent::Some),
    Grade::Extent(Extent::None),
];

fn all_props() -> Vec<DatasetProperties> {
    let mut v = Vec::new();
    for trend in [TrendDirection::Up, TrendDirection::Down, TrendDirection::Constant] {
        for periodic in [false, true] {
            for peaks_valleys in [false, true] {
                for noisy in [false, true] {
                    v.push(DatasetProperties {
                        trend,
                        periodic,
                        peaks_valleys,
                        noisy,
                    });
                }
            }
        }
    }
    v
}

fn lattice(props: &DatasetProperties) -> Vec<FeatureGrades> {
    let opt = |present: bool, g: &'static [Grade; 3]| -> Vec<Option<Grade>> {
        if present {
            g.iter().copied().map(Some).collect()
        } else {
            vec![None]
        }
    };
    let mut out = Vec::new();
    for &t in &ACCURACY {
        for p in opt(props.periodic, &ACCURACY) {
            for k in opt(props.peaks_valleys, &EXTENT) {
                for z in opt(props.noisy, &ACCURACY) {
                    out.push(FeatureGrades {
                        trend: Some(t),
                        periodicity: p,
                        peaks_valleys: k,
                        noise: z,
                    });
                }
            }
        }
    }
    out
}

#[test]
fn clusters_are_total_over_the_grade_lattice() {
    let mut cases = 0;
    for props in all_props() {
        for g in lattice(&props) {
            let label = assign_cluster(&g, &props).expect("every combination gets a label");
            cases += 1;
            // trend lost always means anomaly
            if g.trend.unwrap().is_lost() {
                assert_eq!(label, ClusterLabel::Anomaly);
            }
        }
    }
    assert_eq!(cases, 3 * (1 + 3 + 3 + 9 + 3 + 9 + 9 + 27) * 3);
}

#[test]
fn replicator_and_denoiser_differ_only_in_noise() {
    for props in all_props().into_iter().filter(|p| p.noisy) {
        for g in lattice(&props) {
            let label = assign_cluster(&g, &props).unwrap();
            if !matches!(label, ClusterLabel::Replicator | ClusterLabel::DeNoiser) {
                continue;
            }
            for z in ACCURACY {
                let other = FeatureGrades { noise: Some(z), ..g };
                let l2 = assign_cluster(&other, &props).unwrap();
                assert!(matches!(l2, ClusterLabel::Replicator | ClusterLabel::DeNoiser));
                assert_eq!(l2 == label, z.is_lost() == g.noise.unwrap().is_lost());
            }
        }
    }
}

#[test]
fn missing_grade_for_a_present_feature_is_an_error() {
    let props = DatasetProperties {
        trend: TrendDirection::Up,
        periodic: true,
        peaks_valleys: false,
        noisy: false,
    };
    let g = FeatureGrades {
        trend: Some(ACCURACY[0]),
        periodicity: None,
        peaks_valleys: None,
        noise: None,
    };
    assert!(assign_cluster(&g, &props).is_err());
    assert!(props.has(Feature::Periodicity));
}

#[test]
fn local_linear_loess_can_leave_the_window_range() {
    // Near a boundary the local-linear fit extrapolates: high near values
    // and low far values pull the endpoint above every sample in the window.
    let s = TimeSeries::uniform(vec![10.0, 10.0, 10.0, 0.0, 0.0], 4.0).unwrap();
    let out = estimate_trend_loess(&s, 1.0).unwrap();
    assert!(out.ys()[0] > 10.0, "{:?}", out.ys());
}
