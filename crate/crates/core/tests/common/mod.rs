//! Strategies and property checks shared by the property suite and the
//! acceptance runner.
#![allow(dead_code)]

use num_complex::Complex;
use plc_tdr::autocorr::{Acf, ClosedFormAcf};
use plc_tdr::channel::{
    impulse_response_with_residual, Arrangement, Branch, CableParams, Fault, FaultKind, FrequencyGrid, LoadModel,
    NetworkTopology, Profile, Section,
};
use plc_tdr::metrics::{rayleigh_resolution, Convention};
use plc_tdr::pulses::{PulseSpec, Symbols};
use plc_tdr::reflectometry::{compress, white_noise};
use plc_tdr::scenarios::Scenario;
use plc_tdr::signal::SampledSignal;
use proptest::prelude::*;

pub type Check = Result<(), TestCaseError>;

fn fail(msg: String) -> Check {
    Err(TestCaseError::fail(msg))
}

pub fn pulse_spec() -> impl Strategy<Value = PulseSpec<f64>> {
    prop_oneof![
        (2usize..=48, any::<u64>(), -5.0..-2.0f64).prop_map(|(n, seed, lt)| PulseSpec::hs_ofdm(
            10f64.powf(lt),
            Symbols::seeded(n, seed)
        )
        .unwrap()),
        (-9.0..-3.0f64).prop_map(|ls| PulseSpec::uwb1(10f64.powf(ls)).unwrap()),
        (-9.0..-3.0f64).prop_map(|ls| PulseSpec::uwb2(10f64.powf(ls)).unwrap()),
        (2.0..400.0f64, -6.0..-2.0f64, any::<bool>()).prop_map(|(bt, lt, neg)| {
            let t = 10f64.powf(lt);
            let mu = 2.0 * bt / (t * t);
            PulseSpec::css(if neg { -mu } else { mu }, t).unwrap()
        }),
    ]
}

/// `R(tau) = R(-tau)` and `|R(tau)| <= R(0)` on `points` lags across the
/// support.
pub fn check_acf_shape(spec: &PulseSpec<f64>, points: usize) -> Check {
    let acf = ClosedFormAcf::new(spec);
    let s = acf.support();
    let r0 = acf.value(0.0).unwrap();
    prop_assert!(r0 > 0.0);
    for k in 1..=points {
        let tau = s * k as f64 / (points + 1) as f64;
        let (a, b) = (acf.value(tau).unwrap(), acf.value(-tau).unwrap());
        if (a - b).abs() > 1e-9 * r0 {
            return fail(format!("asymmetric at {tau}: {a} vs {b}"));
        }
        if a.abs() > r0 * (1.0 + 1e-12) {
            return fail(format!("|R({tau})| = {} exceeds R(0) = {r0}", a.abs()));
        }
    }
    Ok(())
}

fn cable() -> impl Strategy<Value = CableParams<f64>> {
    (20.0..500.0f64, 1e8..2.9e8f64, 0.0..1e-2f64, 0.0..1e-8f64).prop_map(|(z0, v, r, g)| {
        let base = CableParams::lossless(z0, v).unwrap();
        CableParams::new(Profile::Constant(r), base.l, Profile::Constant(g), base.c).unwrap()
    })
}

fn load() -> impl Strategy<Value = LoadModel<f64>> {
    prop_oneof![
        Just(LoadModel::Open),
        Just(LoadModel::Short),
        (0.0..1e3f64, -1e3..1e3f64).prop_map(|(r, x)| LoadModel::Constant(Complex::new(r, x))),
        (
            prop::option::of(0.0..500.0f64),
            prop::option::of(1e-7..1e-3f64),
            prop::option::of(1e-10..1e-6f64),
            any::<bool>()
        )
            .prop_filter("needs a component", |(r, l, c, _)| r.is_some()
                || l.is_some()
                || c.is_some())
            .prop_map(|(r, l, c, par)| LoadModel::Rlc {
                r,
                l,
                c,
                arrangement: if par {
                    Arrangement::Parallel
                } else {
                    Arrangement::Series
                },
            }),
    ]
}

/// Passive networks of up to three sections, two branches and one fault.
pub fn topology() -> impl Strategy<Value = NetworkTopology<f64>> {
    (
        prop::collection::vec((0.0..400.0f64, cable()), 1..=3),
        prop::collection::vec((0usize..3, 0.0..200.0f64, cable(), load()), 0..=2),
        load(),
        1.0..500.0f64,
        prop::option::of((0.0..1.0f64, any::<bool>(), load())),
    )
        .prop_map(|(secs, branches, termination, zs, fault)| {
            let n = secs.len();
            let sections: Vec<Section<f64>> = secs
                .into_iter()
                .map(|(length, cable)| Section { length, cable })
                .collect();
            let fault = fault.map(|(u, series, impedance)| Fault {
                section: n - 1,
                offset: u * sections[n - 1].length,
                kind: if series { FaultKind::Series } else { FaultKind::Shunt },
                impedance,
            });
            NetworkTopology {
                branches: branches
                    .into_iter()
                    .map(|(j, length, cable, load)| Branch {
                        at_junction: j % n,
                        length,
                        cable,
                        load,
                    })
                    .collect(),
                sections,
                termination,
                fault,
                source_impedance: LoadModel::resistive(zs),
            }
        })
}

pub fn check_passivity(topo: &NetworkTopology<f64>, f: f64) -> Check {
    match topo.reflection(f) {
        Ok(g) => {
            prop_assert!(g.norm() <= 1.0 + 1e-9, "|Gamma({f})| = {}", g.norm());
            Ok(())
        }
        // a lossless network can be exactly singular at DC
        Err(e) if e.is_numerical_guard() => Ok(()),
        Err(e) => fail(format!("{e}")),
    }
}

pub fn check_realness(topo: &NetworkTopology<f64>) -> Check {
    let grid = FrequencyGrid::new(4097, 5e6).unwrap();
    let (h, residual) = impulse_response_with_residual(topo, &grid).unwrap();
    prop_assert!(h.samples().iter().all(|x| x.is_finite()));
    prop_assert!(residual <= 1e-10, "imaginary residual {residual}");
    Ok(())
}

pub fn check_linearity(y1: &[f64], y2: &[f64], p: &[f64], a: f64, b: f64) -> Check {
    let fs = 1e6;
    let sig = |v: Vec<f64>| SampledSignal::new(v, fs, 0.0).unwrap();
    let pulse = sig(p.to_vec());
    if pulse.norm() == 0.0 {
        return Ok(());
    }
    let n = y1.len().min(y2.len());
    let mix: Vec<f64> = (0..n).map(|i| a * y1[i] + b * y2[i]).collect();
    let lhs = compress(&sig(mix), &pulse, 1e8).unwrap();
    let r1 = compress(&sig(y1[..n].to_vec()), &pulse, 1e8).unwrap();
    let r2 = compress(&sig(y2[..n].to_vec()), &pulse, 1e8).unwrap();
    let scale = r1
        .values()
        .iter()
        .zip(r2.values())
        .fold(0.0f64, |m, (u, v)| m.max((a * u).abs() + (b * v).abs()))
        .max(f64::MIN_POSITIVE);
    for ((l, u), v) in lhs.values().iter().zip(r1.values()).zip(r2.values()) {
        let err = (l - (a * u + b * v)).abs();
        prop_assert!(err <= 1e-12 * scale, "linearity error {err} (scale {scale})");
    }
    Ok(())
}

/// White noise through the unit-norm matched filter keeps its variance.
pub fn check_noise_preservation(spec: &PulseSpec<f64>, variance: f64, seed: u64) -> Check {
    let p = spec.sample(spec.default_sample_rate()).unwrap();
    let n = 1 << 18;
    let noise = SampledSignal::new(white_noise::<f64>(n, variance, seed), p.sample_rate(), 0.0).unwrap();
    let rho = compress(&noise, &p, 1e8).unwrap();
    // drop the partial-overlap edges
    let inner = &rho.values()[p.len()..rho.len() - p.len()];
    let var = inner.iter().map(|v| v * v).sum::<f64>() / inner.len() as f64;
    prop_assert!(
        (var / variance - 1.0).abs() <= 0.05,
        "variance ratio {}",
        var / variance
    );
    Ok(())
}

pub fn check_resolution_ratio(t_delta: f64, convention: Convention) -> Check {
    let lv = rayleigh_resolution(t_delta, Scenario::Lv.phase_velocity(), convention).unwrap();
    let mv = rayleigh_resolution(t_delta, Scenario::Mv.phase_velocity(), convention).unwrap();
    prop_assert!((mv / lv - 2.56 / 1.50).abs() <= 1e-12);
    prop_assert_eq!(format!("{:.2}", mv / lv), "1.71");
    Ok(())
}

pub fn convention() -> impl Strategy<Value = Convention> {
    prop_oneof![Just(Convention::Half), Just(Convention::Full)]
}

/// `(len, signal, signal, pulse, a, b)` for the linearity check.
pub fn linearity_case() -> impl Strategy<Value = (Vec<f64>, Vec<f64>, Vec<f64>, f64, f64)> {
    (
        prop::collection::vec(-1.0..1.0f64, 1..300),
        prop::collection::vec(-1.0..1.0f64, 1..300),
        prop::collection::vec(-1.0..1.0f64, 1..40),
        -10.0..10.0f64,
        -10.0..10.0f64,
    )
}
