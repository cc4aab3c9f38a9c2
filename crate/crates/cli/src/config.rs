//! Job configuration: a JSON file mirrored by command-line flags.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    Kl,
    Reps,
    Jring,
    Cell,
}

impl Stage {
    pub const ALL: [Stage; 4] = [Stage::Kl, Stage::Reps, Stage::Jring, Stage::Cell];

    fn requires(self) -> &'static [Stage] {
        match self {
            Stage::Kl | Stage::Reps => &[],
            Stage::Jring => &[Stage::Kl, Stage::Reps],
            Stage::Cell => &[Stage::Jring],
        }
    }
}

impl FromStr for Stage {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "kl" => Ok(Stage::Kl),
            "reps" => Ok(Stage::Reps),
            "jring" => Ok(Stage::Jring),
            "cell" => Ok(Stage::Cell),
            o => Err(format!("unknown stage `{o}` (kl, reps, jring, cell)")),
        }
    }
}

/// A verification suite and the stage that owns it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    Kl,
    Schur,
    Balance,
    Ring,
    GammaKl,
    Cell,
    Phi,
    P15,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Kl,
        Suite::Schur,
        Suite::Balance,
        Suite::Ring,
        Suite::GammaKl,
        Suite::Cell,
        Suite::Phi,
        Suite::P15,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Kl => "kl",
            Suite::Schur => "schur",
            Suite::Balance => "balance",
            Suite::Ring => "ring",
            Suite::GammaKl => "gamma-kl",
            Suite::Cell => "cell",
            Suite::Phi => "phi",
            Suite::P15 => "p15",
        }
    }

    pub fn stage(self) -> Stage {
        match self {
            Suite::Kl => Stage::Kl,
            Suite::Schur | Suite::Balance => Stage::Reps,
            Suite::Ring | Suite::GammaKl => Stage::Jring,
            Suite::Cell | Suite::Phi | Suite::P15 => Stage::Cell,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s.trim())
            .ok_or_else(|| format!("unknown verification suite `{s}`"))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct JobConfig {
    pub system: String,
    /// `equal`, `universal` or per-generator vectors like `0,1;1,0`.
    pub weights: String,
    /// `natural` or a priority list like `1,0`.
    pub order: String,
    /// `builtin`, `builtin:seminormal`, `builtin:dihedral`, or file paths.
    pub reps: Vec<String>,
    pub stages: Vec<Stage>,
    /// `all`, or suite names; empty runs none.
    pub verify: Vec<String>,
    pub seed: u64,
    /// Worker threads; 0 uses every core.
    pub jobs: usize,
    #[serde(skip_serializing)]
    pub out: PathBuf,
}

impl Default for JobConfig {
    fn default() -> Self {
        JobConfig {
            system: String::new(),
            weights: "equal".into(),
            order: "natural".into(),
            reps: vec!["builtin".into()],
            stages: Stage::ALL.to_vec(),
            verify: vec!["all".into()],
            seed: 0,
            jobs: 0,
            out: PathBuf::from("hecke-out"),
        }
    }
}

impl JobConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
    }

    /// Add every stage a requested stage depends on, in run order.
    pub fn close_stages(&mut self) {
        let mut want = self.stages.clone();
        let mut i = 0;
        while i < want.len() {
            for &r in want[i].requires() {
                if !want.contains(&r) {
                    want.push(r);
                }
            }
            i += 1;
        }
        want.sort();
        want.dedup();
        self.stages = want;
    }

    pub fn has(&self, s: Stage) -> bool {
        self.stages.contains(&s)
    }

    pub fn suites(&self) -> Result<Vec<Suite>, String> {
        let mut out = Vec::new();
        for v in &self.verify {
            match v.trim() {
                "all" => out.extend(Suite::ALL),
                "none" | "" => {}
                s => out.push(s.parse()?),
            }
        }
        out.sort();
        out.dedup();
        Ok(out.into_iter().filter(|s| self.has(s.stage())).collect())
    }

    /// Static checks; the algebra itself is validated when it is built.
    pub fn validate(&self) -> Result<(), String> {
        if self.system.is_empty() {
            return Err("no system given (--system or config `system`)".into());
        }
        self.suites()?;
        for r in &self.reps {
            if !r.starts_with("builtin") && !Path::new(r).exists() {
                return Err(format!("representation file {r} does not exist"));
            }
        }
        if self.reps.is_empty() && self.has(Stage::Reps) {
            return Err("no representations given".into());
        }
        Ok(())
    }
}

/// Split a comma list, dropping blanks.
pub fn split_list(s: &str) -> Vec<String> {
    s.split(',').map(str::trim).filter(|x| !x.is_empty()).map(String::from).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stage_closure() {
        let mut c = JobConfig {
            stages: vec![Stage::Cell],
            ..Default::default()
        };
        c.close_stages();
        assert_eq!(c.stages, Stage::ALL.to_vec());
        c.stages = vec![Stage::Reps];
        c.close_stages();
        assert_eq!(c.stages, vec![Stage::Reps]);
    }

    #[test]
    fn suites_follow_stages() {
        let c = JobConfig {
            stages: vec![Stage::Kl, Stage::Reps],
            ..Default::default()
        };
        assert_eq!(c.suites().unwrap(), vec![Suite::Kl, Suite::Schur, Suite::Balance]);
        let bad = JobConfig {
            verify: vec!["nope".into()],
            ..Default::default()
        };
        assert!(bad.suites().is_err());
    }

    #[test]
    fn config_file_round_trip() {
        let text = r#"{"system": "A1", "stages": ["kl", "reps", "jring", "cell"], "verify": ["all"]}"#;
        let c: JobConfig = serde_json::from_str(text).unwrap();
        assert_eq!(c.system, "A1");
        assert_eq!(c.weights, "equal");
        assert!(serde_json::from_str::<JobConfig>(r#"{"sytem": "A1"}"#).is_err());
    }
}
