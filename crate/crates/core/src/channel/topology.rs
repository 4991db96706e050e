//! Branched network description, its JSON document form, and the
//! back-to-front impedance recursion.

use std::collections::BTreeMap;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::cable::{chain_terms, CableParams};
use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

/// Port state `(V, I)` up to a common factor; `Z = V / I`.
type State<T> = (Complex<T>, Complex<T>);

fn c<T: Real>(re: T) -> Complex<T> {
    Complex::new(re, T::zero())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Arrangement {
    #[default]
    Series,
    Parallel,
}

/// Load impedance as a function of frequency.
#[derive(Debug, Clone, PartialEq)]
pub enum LoadModel<T> {
    Open,
    Short,
    Constant(Complex<T>),
    /// Lumped R, L, C; `None` components are absent from the circuit.
    Rlc {
        r: Option<T>,
        l: Option<T>,
        c: Option<T>,
        arrangement: Arrangement,
    },
}

impl<T: Real> LoadModel<T> {
    pub fn resistive(r: T) -> Self {
        LoadModel::Constant(c(r))
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            LoadModel::Constant(z) if !(z.re >= T::zero()) || !z.im.is_finite() => Err(Error::invalid(
                "load",
                "impedance must be passive (Re Z >= 0) and finite",
            )),
            LoadModel::Rlc { r, l, c, .. } => {
                if [r, l, c]
                    .iter()
                    .any(|x| x.is_some_and(|v| !(v >= T::zero()) || !v.is_finite()))
                {
                    return Err(Error::invalid("load", "R, L and C must be non-negative"));
                }
                if r.is_none() && l.is_none() && c.is_none() {
                    return Err(Error::invalid("load", "RLC load needs at least one component"));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// Impedance as a homogeneous pair `(num, den)`, `Z = num / den`.
    fn homogeneous(&self, f: T) -> State<T> {
        let one = c(T::one());
        let zero = c(T::zero());
        match self {
            LoadModel::Open => (one, zero),
            LoadModel::Short => (zero, one),
            LoadModel::Constant(z) => (*z, one),
            LoadModel::Rlc {
                r,
                l,
                c: cap,
                arrangement,
            } => {
                let jw = Complex::new(T::zero(), T::TAU() * f);
                match arrangement {
                    Arrangement::Series => {
                        // Z = R + jwL + 1/(jwC) = (jwC (R + jwL) + 1) / (jwC)
                        let rl = c(r.unwrap_or(T::zero())) + jw * l.unwrap_or(T::zero());
                        match cap {
                            Some(cv) => (jw * *cv * rl + one, jw * *cv),
                            None => (rl, one),
                        }
                    }
                    Arrangement::Parallel => {
                        // Y = 1/R + 1/(jwL) + jwC; Z = 1 / Y
                        let mut num = one;
                        let mut den = zero;
                        // accumulate Y = den / num as a homogeneous sum
                        let mut add = |yn: Complex<T>, yd: Complex<T>| {
                            den = den * yd + yn * num;
                            num *= yd;
                        };
                        if let Some(rv) = r {
                            add(one, c(*rv));
                        }
                        if let Some(lv) = l {
                            add(one, jw * *lv);
                        }
                        if let Some(cv) = cap {
                            add(jw * *cv, one);
                        }
                        (num, den)
                    }
                }
            }
        }
    }

    /// Impedance at `f`; an open circuit reports `+inf`.
    pub fn impedance(&self, f: T) -> Complex<T> {
        let (n, d) = self.homogeneous(f);
        if d.norm() <= T::min_positive_value() {
            return Complex::new(T::infinity(), T::zero());
        }
        n / d
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Section<T> {
    pub length: T,
    pub cable: CableParams<T>,
}

/// Stub line hanging off the far end of main section `at_junction`.
#[derive(Debug, Clone, PartialEq)]
pub struct Branch<T> {
    pub at_junction: usize,
    pub length: T,
    pub cable: CableParams<T>,
    pub load: LoadModel<T>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum FaultKind {
    /// Impedance to the return conductor (insulation or contact fault).
    #[default]
    Shunt,
    /// Impedance in the line (broken or high-resistance conductor).
    Series,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Fault<T> {
    pub section: usize,
    /// Distance from the start (source side) of the host section.
    pub offset: T,
    pub kind: FaultKind,
    pub impedance: LoadModel<T>,
}

/// Main line of cascaded sections with branches at the junctions, an end
/// termination (the feeder side), an optional fault and the reflectometer's
/// output impedance `Z_PLC`.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkTopology<T> {
    pub sections: Vec<Section<T>>,
    pub branches: Vec<Branch<T>>,
    pub termination: LoadModel<T>,
    pub fault: Option<Fault<T>>,
    pub source_impedance: LoadModel<T>,
}

impl<T: Real> NetworkTopology<T> {
    /// Single section of `length` terminated by `termination`.
    pub fn single_line(
        length: T,
        cable: CableParams<T>,
        termination: LoadModel<T>,
        source_impedance: LoadModel<T>,
    ) -> Self {
        Self {
            sections: vec![Section { length, cable }],
            branches: Vec::new(),
            termination,
            fault: None,
            source_impedance,
        }
    }

    pub fn with_fault(mut self, fault: Fault<T>) -> Self {
        self.fault = Some(fault);
        self
    }

    pub fn without_fault(&self) -> Self {
        Self {
            fault: None,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.sections.is_empty() {
            return Err(Error::invalid("sections", "at least one line section is required"));
        }
        for s in &self.sections {
            if !(s.length >= T::zero()) || !s.length.is_finite() {
                return Err(Error::invalid("length_m", "section lengths must be non-negative"));
            }
            s.cable.validate()?;
        }
        for b in &self.branches {
            if b.at_junction >= self.sections.len() {
                return Err(Error::invalid("at_junction", "junction index beyond the last section"));
            }
            if !(b.length >= T::zero()) || !b.length.is_finite() {
                return Err(Error::invalid("length_m", "branch lengths must be non-negative"));
            }
            b.cable.validate()?;
            b.load.validate()?;
        }
        self.termination.validate()?;
        self.source_impedance.validate()?;
        if let Some(fault) = &self.fault {
            let host = self
                .sections
                .get(fault.section)
                .ok_or_else(|| Error::invalid("fault.section", "no such section"))?;
            if !(fault.offset >= T::zero()) || !(fault.offset <= host.length) {
                return Err(Error::invalid(
                    "fault.offset_m",
                    "offset must lie within the host section",
                ));
            }
            fault.impedance.validate()?;
        }
        Ok(())
    }

    /// Distance from the measurement point to the fault.
    pub fn fault_distance(&self) -> Option<T> {
        self.fault.as_ref().map(|f| {
            self.sections[..f.section]
                .iter()
                .fold(T::zero(), |acc, s| acc + s.length)
                + f.offset
        })
    }

    /// Longest one-way propagation time from the source to any line end,
    /// using the slowest phase velocity up to `f_max`.
    pub fn max_one_way_delay(&self, f_max: T) -> T {
        let delay = |len: T, cable: &CableParams<T>| {
            let v = cable.phase_velocity(f_max).min(cable.nominal_velocity(T::zero()));
            len / v
        };
        let mut cumulative = Vec::with_capacity(self.sections.len());
        let mut acc = T::zero();
        for s in &self.sections {
            acc += delay(s.length, &s.cable);
            cumulative.push(acc);
        }
        self.branches
            .iter()
            .map(|b| cumulative[b.at_junction] + delay(b.length, &b.cable))
            .fold(acc, T::max)
    }

    /// Port state looking into the network at the source, at frequency `f`.
    fn input_state(&self, f: T) -> State<T> {
        let mut state = self.termination.homogeneous(f);
        for m in (0..self.sections.len()).rev() {
            for b in self.branches.iter().filter(|b| b.at_junction == m) {
                let stub = propagate(b.load.homogeneous(f), &b.cable, f, b.length);
                state = parallel(state, stub);
            }
            let sec = &self.sections[m];
            match self.fault.as_ref().filter(|flt| flt.section == m) {
                Some(flt) => {
                    state = propagate(state, &sec.cable, f, sec.length - flt.offset);
                    let zf = flt.impedance.homogeneous(f);
                    state = match flt.kind {
                        FaultKind::Shunt => parallel(state, zf),
                        FaultKind::Series => series(state, zf),
                    };
                    state = propagate(state, &sec.cable, f, flt.offset);
                }
                None => state = propagate(state, &sec.cable, f, sec.length),
            }
        }
        state
    }

    /// Network input impedance at `f`. An open-circuit input (zero
    /// current) reports the unbounded sentinel `+inf`.
    pub fn input_impedance(&self, f: T) -> Result<Complex<T>> {
        check_frequency(f)?;
        let (v, i) = self.input_state(f);
        if i.norm() <= T::tiny() * v.norm() {
            return Ok(Complex::new(T::infinity(), T::zero()));
        }
        Ok(v / i)
    }

    /// Input reflection coefficient against the reflectometer impedance.
    pub fn reflection(&self, f: T) -> Result<Complex<T>> {
        check_frequency(f)?;
        let (v, i) = self.input_state(f);
        let (zn, zd) = self.source_impedance.homogeneous(f);
        // Gamma = (V - Z I) / (V + Z I) with Z = zn / zd
        let num = v * zd - zn * i;
        let den = v * zd + zn * i;
        if den.norm() <= T::min_positive_value() {
            return Err(Error::Singular(format!("Z_in + Z_PLC vanishes at {f} Hz")));
        }
        Ok(num / den)
    }
}

fn check_frequency<T: Real>(f: T) -> Result<()> {
    if !(f >= T::zero()) || !f.is_finite() {
        return Err(Error::invalid("f", "frequency must be non-negative and finite"));
    }
    Ok(())
}

fn normalize<T: Real>((v, i): State<T>) -> State<T> {
    let s = v.norm().max(i.norm());
    if s > T::zero() && s.is_finite() {
        (v / s, i / s)
    } else {
        (v, i)
    }
}

fn propagate<T: Real>((v, i): State<T>, cable: &CableParams<T>, f: T, len: T) -> State<T> {
    if len.is_zero() {
        return (v, i);
    }
    let (a, b, cc) = chain_terms(cable, f, len);
    normalize((a * v + b * i, cc * v + a * i))
}

fn parallel<T: Real>((v1, i1): State<T>, (v2, i2): State<T>) -> State<T> {
    normalize((v1 * v2, i1 * v2 + i2 * v1))
}

fn series<T: Real>((v, i): State<T>, (zn, zd): State<T>) -> State<T> {
    normalize((zd * v + zn * i, zd * i))
}

/// `(Z_in - Z_PLC) / (Z_in + Z_PLC)`; an infinite `Z_in` gives `+1`.
pub fn reflection_coefficient<T: Real>(z_in: Complex<T>, z_plc: Complex<T>) -> Result<Complex<T>> {
    if !z_in.re.is_finite() || !z_in.im.is_finite() {
        return Ok(c(T::one()));
    }
    let den = z_in + z_plc;
    if den.norm() <= T::min_positive_value() {
        return Err(Error::Singular("Z_in + Z_PLC = 0".into()));
    }
    Ok((z_in - z_plc) / den)
}

/// Named cables available to topology documents.
#[derive(Debug, Clone, Default)]
pub struct CableLibrary<T> {
    cables: BTreeMap<String, CableParams<T>>,
}

impl<T: Real> CableLibrary<T> {
    pub fn new() -> Self {
        Self {
            cables: BTreeMap::new(),
        }
    }

    pub fn insert(&mut self, name: impl Into<String>, cable: CableParams<T>) {
        self.cables.insert(name.into().to_ascii_lowercase(), cable);
    }

    pub fn get(&self, name: &str) -> Result<&CableParams<T>> {
        self.cables
            .get(&name.to_ascii_lowercase())
            .ok_or_else(|| Error::Unknown {
                kind: "cable",
                name: name.to_string(),
            })
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.cables.keys().map(String::as_str)
    }
}

/// JSON rendering of a load model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "lowercase", deny_unknown_fields)]
pub enum LoadDoc {
    Open,
    Short,
    Constant {
        re: f64,
        #[serde(default)]
        im: f64,
    },
    #[serde(alias = "RLC")]
    Rlc {
        #[serde(default)]
        r_ohm: Option<f64>,
        #[serde(default)]
        l_h: Option<f64>,
        #[serde(default)]
        c_f: Option<f64>,
        #[serde(default)]
        arrangement: Arrangement,
    },
}

impl LoadDoc {
    pub fn to_model<T: Real>(&self) -> LoadModel<T> {
        match *self {
            LoadDoc::Open => LoadModel::Open,
            LoadDoc::Short => LoadModel::Short,
            LoadDoc::Constant { re, im } => LoadModel::Constant(Complex::new(lit(re), lit(im))),
            LoadDoc::Rlc {
                r_ohm,
                l_h,
                c_f,
                arrangement,
            } => LoadModel::Rlc {
                r: r_ohm.map(lit),
                l: l_h.map(lit),
                c: c_f.map(lit),
                arrangement,
            },
        }
    }
}

/// Cable entry in a topology document: either explicit line constants or a
/// lossless line given by `z0_ohm` and `v_p`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CableDoc {
    Primary {
        r_ohm_per_m: f64,
        l_h_per_m: f64,
        g_s_per_m: f64,
        c_f_per_m: f64,
    },
    Lossless {
        z0_ohm: f64,
        v_p: f64,
    },
}

impl CableDoc {
    pub fn to_params<T: Real>(&self) -> Result<CableParams<T>> {
        match *self {
            CableDoc::Primary {
                r_ohm_per_m,
                l_h_per_m,
                g_s_per_m,
                c_f_per_m,
            } => CableParams::new(
                lit::<T>(r_ohm_per_m).into(),
                lit::<T>(l_h_per_m).into(),
                lit::<T>(g_s_per_m).into(),
                lit::<T>(c_f_per_m).into(),
            ),
            CableDoc::Lossless { z0_ohm, v_p } => CableParams::lossless(lit(z0_ohm), lit(v_p)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SectionDoc {
    pub length_m: f64,
    pub cable: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BranchDoc {
    pub at_junction: usize,
    pub length_m: f64,
    pub cable: String,
    pub load: LoadDoc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FaultDoc {
    pub section: usize,
    pub offset_m: f64,
    #[serde(default)]
    pub kind: FaultKind,
    pub impedance: LoadDoc,
}

/// Topology document:
///
/// ```json
/// {
///   "cables": { "stub": { "z0_ohm": 75, "v_p": 1.5e8 } },
///   "source_impedance": { "model": "constant", "re": 50 },
///   "sections": [ { "length_m": 400, "cable": "lv" } ],
///   "branches": [ { "at_junction": 0, "length_m": 30, "cable": "stub",
///                   "load": { "model": "rlc", "r_ohm": 20, "l_h": 1e-5 } } ],
///   "termination": { "model": "open" },
///   "fault": { "section": 0, "offset_m": 150, "kind": "shunt",
///              "impedance": { "model": "constant", "re": 5 } }
/// }
/// ```
///
/// Cable names resolve against the document's own `cables` table first,
/// then against the library passed to [`TopologyDocument::build`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TopologyDocument {
    #[serde(default)]
    pub cables: BTreeMap<String, CableDoc>,
    pub source_impedance: LoadDoc,
    pub sections: Vec<SectionDoc>,
    #[serde(default)]
    pub branches: Vec<BranchDoc>,
    pub termination: LoadDoc,
    #[serde(default)]
    pub fault: Option<FaultDoc>,
}

impl TopologyDocument {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("topology: {e}")))
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn build<T: Real>(&self, library: &CableLibrary<T>) -> Result<NetworkTopology<T>> {
        let mut lib = library.clone();
        for (name, doc) in &self.cables {
            lib.insert(name.clone(), doc.to_params()?);
        }
        let sections = self
            .sections
            .iter()
            .map(|s| {
                Ok(Section {
                    length: lit(s.length_m),
                    cable: lib.get(&s.cable)?.clone(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let branches = self
            .branches
            .iter()
            .map(|b| {
                Ok(Branch {
                    at_junction: b.at_junction,
                    length: lit(b.length_m),
                    cable: lib.get(&b.cable)?.clone(),
                    load: b.load.to_model(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let topo = NetworkTopology {
            sections,
            branches,
            termination: self.termination.to_model(),
            fault: self.fault.as_ref().map(|f| Fault {
                section: f.section,
                offset: lit(f.offset_m),
                kind: f.kind,
                impedance: f.impedance.to_model(),
            }),
            source_impedance: self.source_impedance.to_model(),
        };
        topo.validate()?;
        Ok(topo)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn lv() -> CableParams<f64> {
        CableParams::lossless(50.0, 1.5e8).unwrap()
    }

    #[test]
    fn matched_line_is_transparent() {
        for len in [0.0, 3.0, 1234.5] {
            let t = NetworkTopology::single_line(len, lv(), LoadModel::resistive(50.0), LoadModel::resistive(50.0));
            let z = t.input_impedance(7.3e5).unwrap();
            assert!((z - Complex::new(50.0, 0.0)).norm() < 1e-9);
            assert!(t.reflection(7.3e5).unwrap().norm() < 1e-12);
        }
    }

    #[test]
    fn quarter_wave_transformer() {
        let f = 1e6;
        let len = 1.5e8 / (4.0 * f);
        let zl = Complex::new(20.0, 15.0);
        let t = NetworkTopology::single_line(len, lv(), LoadModel::Constant(zl), LoadModel::resistive(50.0));
        let z = t.input_impedance(f).unwrap();
        let expect = Complex::new(2500.0, 0.0) / zl;
        assert!((z - expect).norm() < 1e-8 * expect.norm());
    }

    #[test]
    fn zero_length_shows_termination() {
        let zl = Complex::new(33.0, -4.0);
        let t = NetworkTopology::single_line(0.0, lv(), LoadModel::Constant(zl), LoadModel::resistive(50.0));
        assert!((t.input_impedance(1e5).unwrap() - zl).norm() < 1e-12);
    }

    #[test]
    fn open_and_short_limits() {
        let z = Complex::new(50.0, 0.0);
        assert_eq!(
            reflection_coefficient(Complex::new(f64::INFINITY, 0.0), z).unwrap(),
            c(1.0)
        );
        assert_eq!(reflection_coefficient(Complex::new(0.0, 0.0), z).unwrap(), c(-1.0));
        assert_eq!(reflection_coefficient(z, z).unwrap(), c(0.0));
        assert!(reflection_coefficient(Complex::new(0.0, 0.0), Complex::new(0.0, 0.0)).is_err());

        let open = NetworkTopology::single_line(0.0, lv(), LoadModel::Open, LoadModel::resistive(50.0));
        assert!(open.input_impedance(1e3).unwrap().re.is_infinite());
        assert_relative_eq!(open.reflection(1e3).unwrap().re, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn branch_combines_in_parallel() {
        // matched stub at the end of a zero-length feed gives 50 || 50
        let mut t = NetworkTopology::single_line(0.0, lv(), LoadModel::resistive(50.0), LoadModel::resistive(50.0));
        t.branches.push(Branch {
            at_junction: 0,
            length: 80.0,
            cable: lv(),
            load: LoadModel::resistive(50.0),
        });
        assert!((t.input_impedance(2e5).unwrap() - c(25.0)).norm() < 1e-9);
    }

    #[test]
    fn fault_insertion_and_removal_limit() {
        let base = NetworkTopology::single_line(1000.0, lv(), LoadModel::Open, LoadModel::resistive(50.0));
        let removed = base.clone().with_fault(Fault {
            section: 0,
            offset: 400.0,
            kind: FaultKind::Shunt,
            impedance: LoadModel::Open,
        });
        let large = base.clone().with_fault(Fault {
            section: 0,
            offset: 400.0,
            kind: FaultKind::Shunt,
            impedance: LoadModel::resistive(1e13),
        });
        for f in [1e3, 1.7e5, 3.3e6] {
            let g0 = base.reflection(f).unwrap();
            assert!((removed.reflection(f).unwrap() - g0).norm() < 1e-12);
            assert!((large.reflection(f).unwrap() - g0).norm() < 1e-9);
        }
        // a short at the fault point hides the rest of the line
        let shorted = base.clone().with_fault(Fault {
            section: 0,
            offset: 0.0,
            kind: FaultKind::Shunt,
            impedance: LoadModel::Short,
        });
        assert!(shorted.input_impedance(1e5).unwrap().norm() < 1e-12);
        assert_eq!(large.fault_distance(), Some(400.0));
    }

    #[test]
    fn series_fault_breaks_the_line() {
        let base = NetworkTopology::single_line(100.0, lv(), LoadModel::resistive(50.0), LoadModel::resistive(50.0));
        let broken = base.with_fault(Fault {
            section: 0,
            offset: 0.0,
            kind: FaultKind::Series,
            impedance: LoadModel::Open,
        });
        assert!(broken.input_impedance(1e4).unwrap().re.is_infinite());
    }

    #[test]
    fn rlc_loads() {
        let f = 1e4;
        let w = 2.0 * std::f64::consts::PI * f;
        let s = LoadModel::Rlc {
            r: Some(10.0),
            l: Some(1e-3),
            c: Some(1e-6),
            arrangement: Arrangement::Series,
        };
        let expect = Complex::new(10.0, w * 1e-3 - 1.0 / (w * 1e-6));
        assert!((s.impedance(f) - expect).norm() < 1e-9);
        let p = LoadModel::Rlc {
            r: Some(10.0),
            l: Some(1e-3),
            c: Some(1e-6),
            arrangement: Arrangement::Parallel,
        };
        let y = Complex::new(0.1, w * 1e-6 - 1.0 / (w * 1e-3));
        assert!((p.impedance(f) - y.inv()).norm() < 1e-9);
        // a capacitor alone is open at DC
        let cap = LoadModel::<f64>::Rlc {
            r: None,
            l: None,
            c: Some(1e-9),
            arrangement: Arrangement::Series,
        };
        assert!(cap.impedance(0.0).re.is_infinite());
    }

    #[test]
    fn document_round_trip_and_diagnostics() {
        let json = r#"{
            "cables": { "stub": { "z0_ohm": 75, "v_p": 1.2e8 } },
            "source_impedance": { "model": "constant", "re": 50 },
            "sections": [ { "length_m": 400, "cable": "main" }, { "length_m": 100, "cable": "main" } ],
            "branches": [ { "at_junction": 0, "length_m": 30, "cable": "stub",
                            "load": { "model": "RLC", "r_ohm": 20, "l_h": 1e-5 } } ],
            "termination": { "model": "open" },
            "fault": { "section": 1, "offset_m": 50, "impedance": { "model": "constant", "re": 5 } }
        }"#;
        let doc = TopologyDocument::from_json(json).unwrap();
        let mut lib = CableLibrary::new();
        lib.insert("main", lv());
        let topo: NetworkTopology<f64> = doc.build(&lib).unwrap();
        assert_eq!(topo.fault_distance(), Some(450.0));
        assert_eq!(topo.fault.as_ref().unwrap().kind, FaultKind::Shunt);
        let again = TopologyDocument::from_json(&doc.to_json().unwrap()).unwrap();
        assert_eq!(again, doc);

        assert!(matches!(
            doc.build::<f64>(&CableLibrary::new()),
            Err(Error::Unknown { kind: "cable", .. })
        ));
        let bad = json.replace("\"offset_m\": 50", "\"offset_m\": 500");
        assert!(TopologyDocument::from_json(&bad).unwrap().build(&lib).is_err());
        match TopologyDocument::from_json("{\n \"sections\": 3 }") {
            Err(Error::Parse(msg)) => assert!(msg.contains("line")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn one_way_delay_covers_branches() {
        let mut t = NetworkTopology::single_line(300.0, lv(), LoadModel::Open, LoadModel::resistive(50.0));
        t.branches.push(Branch {
            at_junction: 0,
            length: 600.0,
            cable: lv(),
            load: LoadModel::Open,
        });
        assert_relative_eq!(t.max_one_way_delay(1e6), 900.0 / 1.5e8, max_relative = 1e-9);
    }
}
