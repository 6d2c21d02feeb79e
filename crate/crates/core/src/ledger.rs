//! Persistent record of measured unit scalars `±q^k`.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Environment variable overriding the ledger location.
pub const LEDGER_ENV: &str = "QSL2_LEDGER";
pub const DEFAULT_LEDGER: &str = "constants-ledger.json";

/// A unit `sign * q^qpow`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Unit {
    pub sign: i32,
    pub qpow: i32,
}

impl Unit {
    pub const ONE: Unit = Unit { sign: 1, qpow: 0 };

    pub fn new(sign: i32, qpow: i32) -> Self {
        Self { sign, qpow }
    }

    pub fn times(self, other: Unit) -> Unit {
        Unit::new(self.sign * other.sign, self.qpow + other.qpow)
    }
}

impl std::fmt::Display for Unit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = if self.sign < 0 { "-" } else { "" };
        match self.qpow {
            0 => write!(f, "{s}1"),
            1 => write!(f, "{s}q"),
            k => write!(f, "{s}q^{k}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LedgerEntry {
    pub context: String,
    pub i: u8,
    pub j: u8,
    pub measured_sign: i32,
    pub measured_qpow: i32,
}

impl LedgerEntry {
    pub fn new(context: impl Into<String>, i: u8, j: u8, unit: Unit) -> Self {
        Self {
            context: context.into(),
            i,
            j,
            measured_sign: unit.sign,
            measured_qpow: unit.qpow,
        }
    }

    pub fn unit(&self) -> Unit {
        Unit::new(self.measured_sign, self.measured_qpow)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LedgerOutcome {
    Created,
    Verified,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ledger {
    pub entries: Vec<LedgerEntry>,
}

impl Ledger {
    /// The path named by `QSL2_LEDGER`, else `constants-ledger.json` in the working directory.
    pub fn default_path() -> PathBuf {
        std::env::var_os(LEDGER_ENV)
            .map(PathBuf::from)
            .unwrap_or_else(|| PathBuf::from(DEFAULT_LEDGER))
    }

    /// Loads a ledger; a missing file is an empty ledger.
    pub fn load(path: &Path) -> Result<Self> {
        match std::fs::read_to_string(path) {
            Ok(text) => serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display()))),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(Self::default()),
            Err(e) => Err(Error::Io(format!("{}: {e}", path.display()))),
        }
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self).expect("ledger serializes");
        text.push('\n');
        std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
    }

    pub fn get(&self, context: &str, i: u8, j: u8) -> Option<&LedgerEntry> {
        self.entries
            .iter()
            .find(|e| e.context == context && e.i == i && e.j == j)
    }

    /// Appends a new measurement or verifies it against the stored one.
    pub fn record(&mut self, entry: LedgerEntry) -> Result<LedgerOutcome> {
        if let Some(old) = self.get(&entry.context, entry.i, entry.j) {
            if old.unit() == entry.unit() {
                return Ok(LedgerOutcome::Verified);
            }
            return Err(Error::LedgerConflict {
                context: entry.context.clone(),
                i: entry.i,
                j: entry.j,
                stored: old.unit().to_string(),
                measured: entry.unit().to_string(),
            });
        }
        self.entries.push(entry);
        self.entries.sort();
        Ok(LedgerOutcome::Created)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn append_verify_conflict() {
        let mut l = Ledger::default();
        let e = LedgerEntry::new("link-top", 0, 0, Unit::new(1, -1));
        assert_eq!(l.record(e.clone()).unwrap(), LedgerOutcome::Created);
        assert_eq!(l.record(e).unwrap(), LedgerOutcome::Verified);
        let bad = LedgerEntry::new("link-top", 0, 0, Unit::new(-1, -1));
        assert!(matches!(l.record(bad), Err(Error::LedgerConflict { .. })));
    }

    #[test]
    fn round_trip_through_file() {
        let dir = std::env::temp_dir().join(format!("qsl2-ledger-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("ledger.json");
        let mut l = Ledger::load(&path).unwrap();
        assert!(l.entries.is_empty());
        l.record(LedgerEntry::new("x", 1, 0, Unit::new(-1, 3))).unwrap();
        l.save(&path).unwrap();
        assert_eq!(Ledger::load(&path).unwrap(), l);
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
