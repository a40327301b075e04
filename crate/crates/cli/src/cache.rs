//! On-disk cache of classification reports, one JSON file per
//! `(D, genus, sets)`. Files carry a schema version; stale or unreadable
//! entries are recomputed. Writes go through a temporary file and a rename
//! so a concurrent reader never sees a partial entry.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use prym_core::components::{ClassificationReport, Sets};
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct Entry {
    schema: u32,
    disc: i64,
    genus: u8,
    sets: String,
    report: ClassificationReport,
}

pub fn sets_key(sets: Sets) -> String {
    let mut k = String::new();
    for (on, c) in [(sets.p, 'P'), (sets.q, 'Q'), (sets.s, 'S')] {
        if on {
            k.push(c);
        }
    }
    k
}

pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn open(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir).with_context(|| format!("creating cache directory {}", dir.display()))?;
        Ok(Cache { dir: dir.to_path_buf() })
    }

    fn path(&self, disc: i64, genus: u8, sets: Sets) -> PathBuf {
        self.dir.join(format!("g{genus}-{}-{disc}.json", sets_key(sets)))
    }

    pub fn get(&self, disc: i64, genus: u8, sets: Sets) -> Option<ClassificationReport> {
        let text = fs::read_to_string(self.path(disc, genus, sets)).ok()?;
        let e: Entry = serde_json::from_str(&text).ok()?;
        let fresh = e.schema == SCHEMA_VERSION && e.disc == disc && e.genus == genus && e.sets == sets_key(sets);
        fresh.then_some(e.report)
    }

    pub fn put(&self, report: &ClassificationReport, sets: Sets) -> Result<()> {
        let entry = Entry {
            schema: SCHEMA_VERSION,
            disc: report.disc,
            genus: report.genus,
            sets: sets_key(sets),
            report: report.clone(),
        };
        let dest = self.path(report.disc, report.genus, sets);
        let tmp = dest.with_extension(format!("tmp{}", std::process::id()));
        let mut f = fs::File::create(&tmp).with_context(|| format!("writing {}", tmp.display()))?;
        f.write_all(serde_json::to_string(&entry)?.as_bytes())?;
        f.sync_all()?;
        fs::rename(&tmp, &dest).with_context(|| format!("renaming into {}", dest.display()))?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use prym_core::components::classify;

    #[test]
    fn round_trip_and_schema() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::open(dir.path()).unwrap();
        assert!(cache.get(41, 3, Sets::ALL).is_none());
        let r = classify(41, 3, Sets::ALL).unwrap();
        cache.put(&r, Sets::ALL).unwrap();
        assert_eq!(cache.get(41, 3, Sets::ALL), Some(r));
        assert!(cache.get(41, 3, Sets::P_ONLY).is_none());

        let path = dir.path().join("g3-PQS-41.json");
        let text = fs::read_to_string(&path)
            .unwrap()
            .replace("\"schema\":1", "\"schema\":0");
        fs::write(&path, text).unwrap();
        assert!(cache.get(41, 3, Sets::ALL).is_none());
    }
}
