//! Scenario expansion: one base scenario plus at most one sweep axis,
//! yielding the per-point configurations the commands run.

use onebit_mimo::{DecoderVariant, PilotConfig, SchemeKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    M,
    N,
    P,
    Pp,
    K,
    Trials,
}

impl SweepAxis {
    pub fn flag(self) -> &'static str {
        match self {
            SweepAxis::M => "--m-list",
            SweepAxis::N => "--n-list",
            SweepAxis::P => "--p-list",
            SweepAxis::Pp => "--pp-list",
            SweepAxis::K => "--k-list",
            SweepAxis::Trials => "--trials-list",
        }
    }
}

/// One fully resolved simulation point.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub scheme: SchemeKind,
    pub decoder: DecoderVariant,
    pub m: usize,
    pub n: usize,
    pub power: f64,
    pub pilot_power: f64,
    pub pilots: usize,
    pub trials: Option<u64>,
}

pub fn scheme_token(scheme: SchemeKind) -> &'static str {
    match scheme {
        SchemeKind::TxBeamform => "tx-beamform",
        SchemeKind::RxCombine => "rx-combine",
    }
}

pub fn decoder_token(decoder: DecoderVariant) -> &'static str {
    match decoder {
        DecoderVariant::RealCombining => "paper",
        DecoderVariant::MatchedFilter => "matched",
    }
}

impl Scenario {
    pub fn pilot(&self) -> Result<PilotConfig, String> {
        PilotConfig::new(self.pilot_power, self.pilots).map_err(|e| e.to_string())
    }

    /// Scheme-level shape checks, applied per sweep point before any trial.
    pub fn check(&self) -> Result<(), String> {
        if self.m == 0 || self.n == 0 {
            return Err("M and N must be at least 1".into());
        }
        if self.scheme == SchemeKind::TxBeamform && !self.m.is_multiple_of(self.n) {
            return Err(format!("N must divide M (got M={}, N={})", self.m, self.n));
        }
        if self.power <= 0.0 || !self.power.is_finite() {
            return Err(format!("P must be positive (got {})", self.power));
        }
        self.pilot()?;
        if let Some(0) = self.trials {
            return Err("trials must be at least 1".into());
        }
        Ok(())
    }
}

/// Values for the base scenario; `None` means the value must come from the
/// sweep list on that axis.
#[derive(Debug, Clone)]
pub struct ScenarioSpec {
    pub scheme: Option<SchemeKind>,
    pub decoder: DecoderVariant,
    pub m: Option<usize>,
    pub n: Option<usize>,
    pub power: Option<f64>,
    pub pilot_power: Option<f64>,
    pub pilots: Option<usize>,
    pub trials: Option<u64>,
    pub m_list: Option<Vec<usize>>,
    pub n_list: Option<Vec<usize>>,
    pub p_list: Option<Vec<f64>>,
    pub pp_list: Option<Vec<f64>>,
    pub k_list: Option<Vec<usize>>,
    pub trials_list: Option<Vec<u64>>,
}

impl Default for ScenarioSpec {
    fn default() -> Self {
        ScenarioSpec {
            scheme: None,
            decoder: DecoderVariant::RealCombining,
            m: None,
            n: None,
            power: None,
            pilot_power: None,
            pilots: None,
            trials: None,
            m_list: None,
            n_list: None,
            p_list: None,
            pp_list: None,
            k_list: None,
            trials_list: None,
        }
    }
}

impl ScenarioSpec {
    fn active_axes(&self) -> Vec<SweepAxis> {
        let mut axes = Vec::new();
        if self.m_list.is_some() {
            axes.push(SweepAxis::M);
        }
        if self.n_list.is_some() {
            axes.push(SweepAxis::N);
        }
        if self.p_list.is_some() {
            axes.push(SweepAxis::P);
        }
        if self.pp_list.is_some() {
            axes.push(SweepAxis::Pp);
        }
        if self.k_list.is_some() {
            axes.push(SweepAxis::K);
        }
        if self.trials_list.is_some() {
            axes.push(SweepAxis::Trials);
        }
        axes
    }

    /// Expands into one scenario per sweep value (or a single point when no
    /// list is given). At most one sweep axis is allowed per invocation.
    pub fn expand(&self) -> Result<Vec<Scenario>, String> {
        let axes = self.active_axes();
        if axes.len() > 1 {
            let flags: Vec<&str> = axes.iter().map(|a| a.flag()).collect();
            return Err(format!("at most one sweep list may be given ({})", flags.join(", ")));
        }

        let scheme = self.scheme.ok_or("--scheme is required")?;
        let need = |v: Option<usize>, flag: &str, axis: SweepAxis| -> Result<usize, String> {
            match v {
                Some(x) => Ok(x),
                None if axes.first() == Some(&axis) => Ok(0), // replaced per point
                None => Err(format!("{flag} is required")),
            }
        };
        let base = Scenario {
            scheme,
            decoder: self.decoder,
            m: need(self.m, "--m", SweepAxis::M)?,
            n: need(self.n, "--n", SweepAxis::N)?,
            power: match self.power {
                Some(p) => p,
                None if axes.first() == Some(&SweepAxis::P) => f64::NAN,
                None => return Err("--power is required".into()),
            },
            pilot_power: match self.pilot_power {
                Some(p) => p,
                None if axes.first() == Some(&SweepAxis::Pp) => f64::NAN,
                None => return Err("--pilot-power is required".into()),
            },
            pilots: need(self.pilots, "--pilots", SweepAxis::K)?,
            trials: self.trials,
        };

        let points: Vec<Scenario> = match axes.first() {
            None => vec![base],
            Some(SweepAxis::M) => self
                .m_list
                .as_ref()
                .unwrap()
                .iter()
                .map(|&m| Scenario { m, ..base.clone() })
                .collect(),
            Some(SweepAxis::N) => self
                .n_list
                .as_ref()
                .unwrap()
                .iter()
                .map(|&n| Scenario { n, ..base.clone() })
                .collect(),
            Some(SweepAxis::P) => self
                .p_list
                .as_ref()
                .unwrap()
                .iter()
                .map(|&power| Scenario { power, ..base.clone() })
                .collect(),
            Some(SweepAxis::Pp) => self
                .pp_list
                .as_ref()
                .unwrap()
                .iter()
                .map(|&pilot_power| Scenario { pilot_power, ..base.clone() })
                .collect(),
            Some(SweepAxis::K) => self
                .k_list
                .as_ref()
                .unwrap()
                .iter()
                .map(|&pilots| Scenario { pilots, ..base.clone() })
                .collect(),
            Some(SweepAxis::Trials) => self
                .trials_list
                .as_ref()
                .unwrap()
                .iter()
                .map(|&t| Scenario { trials: Some(t), ..base.clone() })
                .collect(),
        };
        if points.is_empty() {
            return Err("sweep list is empty".into());
        }
        for point in &points {
            point.check()?;
        }
        Ok(points)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base_spec() -> ScenarioSpec {
        ScenarioSpec {
            scheme: Some(SchemeKind::TxBeamform),
            decoder: DecoderVariant::RealCombining,
            m: Some(8),
            n: Some(2),
            power: Some(1.0),
            pilot_power: Some(1.0),
            pilots: Some(1),
            trials: Some(100),
            ..ScenarioSpec::default()
        }
    }

    #[test]
    fn single_point_expansion() {
        let points = base_spec().expand().unwrap();
        assert_eq!(points.len(), 1);
        assert_eq!(points[0].m, 8);
    }

    #[test]
    fn sweep_replaces_axis_value() {
        let mut spec = base_spec();
        spec.m = None;
        spec.m_list = Some(vec![16, 64, 256]);
        let points = spec.expand().unwrap();
        assert_eq!(points.iter().map(|s| s.m).collect::<Vec<_>>(), vec![16, 64, 256]);
    }

    #[test]
    fn two_sweep_lists_rejected() {
        let mut spec = base_spec();
        spec.m_list = Some(vec![16]);
        spec.n_list = Some(vec![2]);
        let err = spec.expand().unwrap_err();
        assert!(err.contains("one sweep list"));
    }

    #[test]
    fn group_split_reported_per_point() {
        let mut spec = base_spec();
        spec.m = Some(10);
        spec.n = Some(4);
        let err = spec.expand().unwrap_err();
        assert!(err.contains("N must divide M"));
    }

    #[test]
    fn missing_required_flag_reported() {
        let mut spec = base_spec();
        spec.power = None;
        assert!(spec.expand().unwrap_err().contains("--power"));
    }
}
