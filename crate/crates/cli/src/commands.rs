use std::collections::BTreeMap;

use plc_tdr::autocorr::{oracle_comparison, AcfCurve};
use plc_tdr::channel::{FaultDoc, FaultKind, FrequencyGrid, LoadDoc, SectionDoc, TopologyDocument};
use plc_tdr::io::Header;
use plc_tdr::metrics::{evaluate, MetricsConfig, RangeTarget};
use plc_tdr::pulses::{Family, PulseDocument, PulseSpec, Symbols, UWB_DURATION_SIGMAS};
use plc_tdr::reflectometry::{frame_grid, run_fault_frame_on, FrameSetup, NoiseSpec};
use plc_tdr::scenarios::{
    cable_library, preset_cable, reproduce_table, sweep, write_sweep_csv, Expectations, RegulatoryBand,
    ReproductionOptions, SweepConfig, SweepRange, TABLE_IDS,
};
use plc_tdr::{Error, Result};

use crate::args::{AcfArgs, DemoArgs, Format, MetricsArgs, PulseArgs, SimulateArgs, Span, SweepArgs, TablesArgs};
use crate::output::{read_input, record, to_text, Artifact, Outcome};

/// Settings shared by every command.
pub struct Context {
    pub format: Format,
    pub seed: u64,
    pub input_hash: String,
}

impl Context {
    fn header(&self, kind: &str) -> Header {
        Header::new(kind)
            .with_seed(self.seed)
            .with_input_hash(self.input_hash.clone())
    }

    fn record<S: serde::Serialize>(&self, stem: &str, value: &S, header: &Header) -> Result<Artifact> {
        let (text, ext) = record(value, header, self.format)?;
        Ok(Artifact::new(format!("{stem}.{ext}"), text))
    }
}

fn invalid(field: &'static str, reason: &str) -> Error {
    Error::InvalidParameter {
        field,
        reason: reason.into(),
    }
}

pub fn build_pulse(p: &PulseArgs, seed: u64) -> Result<PulseSpec<f64>> {
    let b = p.band.unwrap_or(RegulatoryBand::Fcc).bandwidth();
    let spec = match p.family {
        Family::HsOfdm => {
            let symbols = Symbols::seeded(p.n, seed);
            match p.t {
                Some(t) => PulseSpec::hs_ofdm(t, symbols)?,
                None => PulseSpec::for_bandwidth(Family::HsOfdm, b, p.n, Some(symbols))?,
            }
        }
        Family::Uwb1 | Family::Uwb2 => {
            let sigma = p.sigma.or(p.t.map(|t| t / UWB_DURATION_SIGMAS));
            match (sigma, p.family) {
                (Some(s), Family::Uwb1) => PulseSpec::uwb1(s)?,
                (Some(s), _) => PulseSpec::uwb2(s)?,
                (None, family) => PulseSpec::for_bandwidth(family, b, p.n, None)?,
            }
        }
        Family::Css => match (p.mu, p.t) {
            (Some(mu), Some(t)) => PulseSpec::css(mu, t)?,
            (None, Some(t)) => PulseSpec::css_for_band(b, t)?,
            (Some(_), None) => return Err(invalid("t", "--mu needs --t")),
            (None, None) => PulseSpec::for_bandwidth(Family::Css, b, p.n, None)?,
        },
    };
    spec.with_energy(p.energy)
}

fn sample_rate(p: &PulseArgs, spec: &PulseSpec<f64>) -> f64 {
    p.fs.unwrap_or_else(|| spec.default_sample_rate())
}

fn with_band(header: Header, p: &PulseArgs) -> Header {
    match p.band {
        Some(b) => header.with("band", b.name()),
        None => header,
    }
}

pub fn pulse(ctx: &Context, p: &PulseArgs) -> Result<Outcome> {
    let spec = build_pulse(p, ctx.seed)?;
    let fs = sample_rate(p, &spec);
    let samples = spec.transmit_signal(fs)?;
    let doc = PulseDocument::from(&spec);
    let main = ctx.record("pulse", &doc, &with_band(ctx.header("pulse"), p))?;
    let header = ctx.header("pulse-samples").with("sample_rate_hz", fs);
    let wave = to_text(|buf| samples.write_csv(buf, &header))?;
    Ok(Outcome {
        artifacts: vec![main, Artifact::new("pulse_samples.csv", wave)],
        stdout: vec![0],
        reproduction_failed: false,
    })
}

pub fn acf(ctx: &Context, a: &AcfArgs) -> Result<Outcome> {
    let spec = build_pulse(&a.pulse, ctx.seed)?;
    let curve = AcfCurve::closed_form(&spec, a.points)?;
    let header = with_band(ctx.header("acf"), &a.pulse).with("family", spec.family().key());
    let mut artifacts = vec![Artifact::new("acf.csv", to_text(|buf| curve.write_csv(buf, &header))?)];
    if !a.oracle {
        return Ok(Outcome::single(artifacts.remove(0)));
    }
    let report = oracle_comparison(&spec, sample_rate(&a.pulse, &spec))?;
    artifacts.push(ctx.record("acf_oracle", &report, &ctx.header("acf-oracle"))?);
    Ok(Outcome {
        artifacts,
        stdout: vec![1],
        reproduction_failed: false,
    })
}

pub fn metrics(ctx: &Context, m: &MetricsArgs) -> Result<Outcome> {
    let spec = build_pulse(&m.pulse, ctx.seed)?;
    let v_p = match m.v_p {
        Some(v) => v,
        None => preset_cable::<f64>(&m.cable)?.v_p,
    };
    let mut config = MetricsConfig::new(v_p);
    config.convention = m.convention;
    config.zero_crossing = m.zero_crossing;
    config.sidelobes = !m.no_sidelobes;
    config.range = match (m.delta_tp, m.d_max) {
        (Some(dtp), _) => Some(RangeTarget::Interval(dtp)),
        (None, Some(d)) => Some(RangeTarget::Distance(d)),
        (None, None) => None,
    };
    let report = evaluate(&spec, &config)?;
    let mut header = with_band(ctx.header("metrics"), &m.pulse);
    if m.v_p.is_none() {
        header = header.with("cable", &m.cable);
    }
    Ok(Outcome::single(ctx.record("metrics", &report, &header)?))
}

/// Matched line of `length_m` with a resistive shunt fault at `fault_m`.
pub fn demo_topology(d: &DemoArgs) -> TopologyDocument {
    let z0 = preset_cable::<f64>("lv").expect("lv preset").z0;
    let matched = LoadDoc::Constant { re: z0, im: 0.0 };
    TopologyDocument {
        cables: BTreeMap::new(),
        source_impedance: matched.clone(),
        sections: vec![SectionDoc {
            length_m: d.length_m,
            cable: "lv".into(),
        }],
        branches: Vec::new(),
        termination: matched,
        fault: Some(FaultDoc {
            section: 0,
            offset_m: d.fault_m,
            kind: FaultKind::Shunt,
            impedance: LoadDoc::Constant {
                re: d.fault_ohm,
                im: 0.0,
            },
        }),
    }
}

pub fn topology(d: &DemoArgs) -> Result<Outcome> {
    let mut json = demo_topology(d).to_json()?;
    json.push('\n');
    Ok(Outcome::single(Artifact::new("topology.json", json)))
}

pub fn simulate(ctx: &Context, s: &SimulateArgs) -> Result<Outcome> {
    let doc = match &s.topology {
        Some(path) => TopologyDocument::from_json(&read_input(path)?)?,
        None => demo_topology(&s.demo),
    };
    let topo = doc.build(&cable_library::<f64>())?;
    let spec = build_pulse(&s.pulse, ctx.seed)?;
    let fs = sample_rate(&s.pulse, &spec);
    let noise = match s.snr_db {
        Some(snr) if snr.is_finite() => NoiseSpec::snr_db(ctx.seed, snr),
        Some(snr) if snr < 0.0 => return Err(invalid("snr_db", "must not be -inf")),
        _ => NoiseSpec {
            seed: ctx.seed,
            ..NoiseSpec::silent()
        },
    };
    let setup = FrameSetup {
        pulse: spec,
        sample_rate: fs,
        v_p: preset_cable::<f64>(&s.cable)?.v_p,
        noise,
        threshold_fraction: s.threshold,
    };
    let grid = match s.grid_points {
        Some(n) => FrequencyGrid::for_sample_rate(fs, n)?,
        None => frame_grid(&topo, fs)?,
    };
    let frame = run_fault_frame_on(&topo, &setup, &grid)?;

    let base = |kind: &str| {
        let h = with_band(ctx.header(kind), &s.pulse)
            .with("family", setup.pulse.family().key())
            .with("grid_points", grid.len());
        match topo.fault_distance() {
            Some(d) => h.with("topology_fault_m", d),
            None => h,
        }
    };
    let mut artifacts = vec![ctx.record("fault", &frame.report, &base("fault-report"))?];
    for (name, trace) in [
        ("rho_normal", &frame.rho_normal),
        ("rho_fault", &frame.rho_fault),
        ("delta_rho", &frame.delta),
    ] {
        let header = base(name);
        artifacts.push(Artifact::new(
            format!("{name}.csv"),
            to_text(|buf| trace.write_csv(buf, &header))?,
        ));
    }
    Ok(Outcome {
        artifacts,
        stdout: vec![0],
        reproduction_failed: false,
    })
}

pub fn tables(ctx: &Context, t: &TablesArgs) -> Result<Outcome> {
    let expectations = match &t.expectations {
        Some(path) => Expectations::from_csv(&read_input(path)?)?,
        None => Expectations::builtin(),
    };
    let opts = ReproductionOptions {
        convention: t.convention,
        zero_crossing: t.zero_crossing,
        symbol_seed: ctx.seed,
        expectations,
    };
    let ids: Vec<u8> = if t.id.is_empty() {
        TABLE_IDS.to_vec()
    } else {
        t.id.clone()
    };
    let mut outcome = Outcome {
        artifacts: Vec::new(),
        stdout: Vec::new(),
        reproduction_failed: false,
    };
    for id in ids {
        let report = reproduce_table(id, &opts)?;
        let failed = report.failures().count();
        eprintln!(
            "table {id}: {}/{} cells pass, max rel err {:.3e}",
            report.cells.len() - failed,
            report.cells.len(),
            report.max_rel_err()
        );
        outcome.reproduction_failed |= !report.passed();
        let mut header = ctx.header("table").with("table", id);
        if let Some(c) = report.convention {
            header = header.with("convention", c);
        }
        outcome.stdout.push(outcome.artifacts.len());
        outcome.artifacts.push(Artifact::new(
            format!("table_{id}.csv"),
            to_text(|buf| report.write_csv(buf, &header))?,
        ));
    }
    Ok(outcome)
}

pub fn sweep_cmd(ctx: &Context, s: &SweepArgs) -> Result<Outcome> {
    let mut range = match s.span {
        Span::Narrowband => SweepRange::narrowband(),
        Span::Broadband => SweepRange::broadband(),
    };
    range.b_min = s.b_min.unwrap_or(range.b_min);
    range.b_max = s.b_max.unwrap_or(range.b_max);
    let mut config = SweepConfig::new(s.family, range);
    config.points = s.points;
    config.subcarriers = s.n;
    config.convention = s.convention;
    config.zero_crossing = s.zero_crossing;
    if !s.delta_tp.is_empty() {
        config.repetition_intervals = s.delta_tp.clone();
    }
    let rows = sweep(&config)?;
    let header = ctx
        .header("sweep")
        .with("family", s.family.key())
        .with("convention", s.convention)
        .with("zero_crossing", s.zero_crossing);
    let text = to_text(|buf| write_sweep_csv(&config, &rows, buf, &header))?;
    Ok(Outcome::single(Artifact::new("sweep.csv", text)))
}
