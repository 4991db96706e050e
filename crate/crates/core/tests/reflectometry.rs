use plc_tdr::channel::{impulse_response, Branch, FrequencyGrid, LoadModel, NetworkTopology, Section};
use plc_tdr::metrics::{nominal_zero_crossing, rayleigh_resolution, repetition_interval, Convention};
use plc_tdr::pulses::{Family, PulseSpec};
use plc_tdr::reflectometry::{
    compress, differential_reflectogram, frame_grid, inter_frame_leakage, locate_fault, simulate_echo, NoiseSpec,
};
use plc_tdr::scenarios::{preset_cable, RegulatoryBand};

const LV_V: f64 = 1.5e8;

fn lv_line(length: f64, termination: LoadModel<f64>) -> NetworkTopology<f64> {
    let cable = preset_cable::<f64>("lv").unwrap();
    NetworkTopology::single_line(length, cable.params, termination, LoadModel::resistive(cable.z0))
}

fn argmax_abs(v: &[f64]) -> usize {
    v.iter()
        .enumerate()
        .max_by(|a, b| a.1.abs().partial_cmp(&b.1.abs()).unwrap())
        .unwrap()
        .0
}

#[test]
fn first_echo_delay_within_one_sample() {
    let fs = 50e6;
    for len in [10.0, 100.0, 1000.0] {
        let topo = lv_line(len, LoadModel::Short);
        let h = impulse_response(&topo, &FrequencyGrid::for_sample_rate(fs, 4097).unwrap()).unwrap();
        let k = argmax_abs(h.samples());
        let expected = 2.0 * len / LV_V * fs;
        assert!(
            (k as f64 - expected).abs() <= 1.0,
            "len {len}: peak at {k}, expected {expected}"
        );
        assert!(h.samples()[k] < 0.0);
    }
}

#[test]
fn matched_source_response_is_causal() {
    let fs = 20e6;
    for k in [3usize, 40, 333] {
        let len = k as f64 * LV_V / (2.0 * fs);
        let topo = lv_line(len, LoadModel::resistive(10.0));
        let h = impulse_response(&topo, &FrequencyGrid::for_sample_rate(fs, 8193).unwrap()).unwrap();
        let total: f64 = h.samples().iter().map(|x| x * x).sum();
        let early: f64 = h.samples()[..k].iter().map(|x| x * x).sum();
        assert!(early <= 1e-6 * total, "k = {k}: {early} of {total}");
    }
}

const FIRST_FAULT: f64 = 600.0;

/// Peak distances of the differential trace for two equal shunt faults
/// `sep` metres apart on a matched LV line.
fn fault_peaks(family: Family, sep: f64) -> Vec<f64> {
    let band = RegulatoryBand::Fcc.bandwidth();
    let pulse = PulseSpec::<f64>::for_bandwidth(family, band, 512, None).unwrap();
    let fs = pulse.default_sample_rate();
    let cable = preset_cable::<f64>("lv").unwrap();
    let sections = vec![
        Section {
            length: FIRST_FAULT,
            cable: cable.params.clone(),
        },
        Section {
            length: sep,
            cable: cable.params.clone(),
        },
        Section {
            length: 1500.0,
            cable: cable.params.clone(),
        },
    ];
    let normal = NetworkTopology {
        sections,
        branches: Vec::new(),
        termination: LoadModel::resistive(cable.z0),
        fault: None,
        source_impedance: LoadModel::resistive(cable.z0),
    };
    let faulted = NetworkTopology {
        branches: (0..2)
            .map(|j| Branch {
                at_junction: j,
                length: 0.0,
                cable: cable.params.clone(),
                load: LoadModel::resistive(10.0 * cable.z0),
            })
            .collect(),
        ..normal.clone()
    };
    let x = pulse.transmit_signal(fs).unwrap();
    let grid = frame_grid(&faulted, fs).unwrap();
    let trace = |t: &NetworkTopology<f64>| {
        let h = impulse_response(t, &grid).unwrap();
        compress(&simulate_echo(&x, &h, &NoiseSpec::silent()).unwrap(), &x, LV_V).unwrap()
    };
    let delta = differential_reflectogram(&trace(&faulted), &trace(&normal)).unwrap();
    let peak = delta.values().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    locate_fault(&delta, 0.5 * peak).unwrap().peak_distances_m
}

#[test]
fn resolution_law_per_family() {
    for family in Family::ALL {
        let pulse = PulseSpec::<f64>::for_bandwidth(family, RegulatoryBand::Fcc.bandwidth(), 512, None).unwrap();
        let td = nominal_zero_crossing(&pulse);
        let full = rayleigh_resolution(td, LV_V, Convention::Full).unwrap();
        let half = rayleigh_resolution(td, LV_V, Convention::Half).unwrap();
        let near = |peaks: &[f64], d: f64| peaks.iter().any(|p| (p - d).abs() <= half / 2.0);
        let peaks = fault_peaks(family, full);
        assert!(
            near(&peaks, FIRST_FAULT) && near(&peaks, FIRST_FAULT + full),
            "{family:?} not resolved at {full} m: {peaks:?}"
        );
        let sep = half / 4.0;
        let peaks = fault_peaks(family, sep);
        let inside = peaks
            .iter()
            .filter(|&&p| p >= FIRST_FAULT - half && p <= FIRST_FAULT + sep + half)
            .count();
        assert_eq!(inside, 1, "{family:?} resolved at {sep} m: {peaks:?}");
    }
}

#[test]
fn frames_do_not_overlap_up_to_d_max() {
    let d_max = 1000.0;
    for family in Family::ALL {
        let pulse = PulseSpec::<f64>::for_bandwidth(family, RegulatoryBand::Fcc.bandwidth(), 64, None).unwrap();
        let fs = pulse.default_sample_rate();
        let dtp = repetition_interval(d_max, pulse.duration(), LV_V).unwrap();
        // farthest on-grid length inside the range
        let len = (d_max * 2.0 * fs / LV_V).floor() * LV_V / (2.0 * fs);
        let topo = lv_line(len, LoadModel::Open);
        let x = pulse.transmit_signal(fs).unwrap();
        let h = impulse_response(&topo, &frame_grid(&topo, fs).unwrap()).unwrap();
        let y = simulate_echo(&x, &h, &NoiseSpec::silent()).unwrap();
        let leak = inter_frame_leakage(&y, -pulse.duration() / 2.0, dtp);
        assert!(leak <= 1e-6, "{family:?}: leakage {leak}");
    }
}

#[test]
fn seeded_runs_are_reproducible() {
    let pulse = PulseSpec::<f64>::for_bandwidth(Family::Css, 148.5e3, 64, None).unwrap();
    let fs = pulse.default_sample_rate();
    let x = pulse.transmit_signal(fs).unwrap();
    let topo = lv_line(800.0, LoadModel::Open);
    let h = impulse_response(&topo, &frame_grid(&topo, fs).unwrap()).unwrap();
    let a = simulate_echo(&x, &h, &NoiseSpec::snr_db(11, 10.0)).unwrap();
    let b = simulate_echo(&x, &h, &NoiseSpec::snr_db(11, 10.0)).unwrap();
    let c = simulate_echo(&x, &h, &NoiseSpec::snr_db(12, 10.0)).unwrap();
    assert_eq!(a, b);
    assert_ne!(a, c);
}
