//! Level lookup through the cache, the bundled snapshot and the remote API,
//! in that order.

use std::path::PathBuf;
use std::time::Duration;

use super::cache::{cache_path, load_cached, store_cached, store_text};
use super::lmfdb::LmfdbClient;
use super::{bundled_snapshot, decode_level, NewformRecord, Source};
use crate::error::{Error, Result};

pub const DEFAULT_SOURCE_URL: &str = "https://www.lmfdb.org";
pub const DEFAULT_MIN_AN: usize = 600;

#[derive(Clone, Debug)]
pub struct StoreConfig {
    pub cache_dir: Option<PathBuf>,
    pub source_url: String,
    pub offline: bool,
    pub use_bundled: bool,
    pub min_an: usize,
    pub request_interval: Duration,
}

impl Default for StoreConfig {
    fn default() -> Self {
        StoreConfig {
            cache_dir: None,
            source_url: DEFAULT_SOURCE_URL.to_string(),
            offline: false,
            use_bundled: true,
            min_an: DEFAULT_MIN_AN,
            request_interval: Duration::from_secs(1),
        }
    }
}

impl StoreConfig {
    /// Bundled data only; no cache, no network.
    pub fn offline() -> Self {
        StoreConfig {
            offline: true,
            ..Self::default()
        }
    }
}

#[derive(Clone, Debug)]
pub struct NewformStore {
    config: StoreConfig,
}

fn enough(records: &[NewformRecord], min_an: usize) -> bool {
    records.iter().all(|r| r.num_an() >= min_an)
}

impl NewformStore {
    pub fn new(config: StoreConfig) -> Self {
        NewformStore { config }
    }

    pub fn config(&self) -> &StoreConfig {
        &self.config
    }

    /// All weight-2 newforms of trivial character at `level`. Results are
    /// written to the cache directory when one is configured.
    pub fn fetch_level(&self, level: u64) -> Result<Vec<NewformRecord>> {
        if level == 0 {
            return Err(Error::invalid("level must be positive"));
        }
        let min_an = self.config.min_an;
        if let Some(dir) = &self.config.cache_dir {
            if cache_path(dir, level).exists() {
                let records = load_cached(dir, level)?;
                if enough(&records, min_an) {
                    return Ok(records);
                }
            }
        }
        if self.config.use_bundled {
            if let Some(text) = bundled_snapshot(level) {
                let records = decode_level(text, Source::Bundled)?;
                if enough(&records, min_an) {
                    if let Some(dir) = &self.config.cache_dir {
                        store_text(dir, level, text)?;
                    }
                    return Ok(records);
                }
            }
        }
        if self.config.offline {
            return Err(Error::Unavailable(format!(
                "level {level} is not cached or bundled with {min_an} coefficients, and network access is disabled"
            )));
        }
        let records = self.client()?.fetch_level(level, min_an)?;
        if let Some(dir) = &self.config.cache_dir {
            store_cached(dir, level, &records)?;
        }
        Ok(records)
    }

    /// Number of newforms at `level` with nontrivial character, when the
    /// remote source can be asked; `None` offline.
    pub fn count_nontrivial_character_forms(&self, level: u64) -> Result<Option<usize>> {
        if self.config.offline {
            return Ok(None);
        }
        self.client()?
            .count_nontrivial_character_forms(level)
            .map(Some)
    }

    fn client(&self) -> Result<LmfdbClient> {
        let client = LmfdbClient::new(&self.config.source_url, self.config.request_interval)?;
        Ok(match &self.config.cache_dir {
            Some(dir) => client.with_archive(dir.clone()),
            None => client,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_level_32_offline() {
        let store = NewformStore::new(StoreConfig::offline());
        let forms = store.fetch_level(32).unwrap();
        assert_eq!(forms.len(), 1);
        assert_eq!(forms[0].dimension, 1);
        assert_eq!(forms[0].cm_discriminant, Some(-4));
        assert_eq!(forms[0].source, Source::Bundled);
    }

    #[test]
    fn offline_without_bundle_is_unavailable() {
        let dir = tempfile::tempdir().unwrap();
        let store = NewformStore::new(StoreConfig {
            cache_dir: Some(dir.path().to_path_buf()),
            use_bundled: false,
            ..StoreConfig::offline()
        });
        assert!(matches!(
            store.fetch_level(2336),
            Err(Error::Unavailable(_))
        ));
    }

    #[test]
    fn cache_is_populated_and_reused() {
        let dir = tempfile::tempdir().unwrap();
        let config = StoreConfig {
            cache_dir: Some(dir.path().to_path_buf()),
            ..StoreConfig::offline()
        };
        let first = NewformStore::new(config.clone()).fetch_level(32).unwrap();
        assert!(cache_path(dir.path(), 32).exists());
        let again = NewformStore::new(StoreConfig {
            use_bundled: false,
            ..config
        })
        .fetch_level(32)
        .unwrap();
        assert_eq!(first, again);
    }
}
