//! Line-delimited JSON records, the account corpus and table loading.

use std::collections::BTreeMap;
use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use mcua_core::eval::{Dataset, PairKey};
use mcua_core::text::{CharClasses, Network};
use mcua_core::translit::{TableSources, TABLE_FILES};
use mcua_core::{Account, Transliterator};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

/// Optional character-class file looked up next to the tables.
pub const CHAR_CLASS_FILE: &str = "char_classes.txt";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AccountRecord {
    pub network: u8,
    pub id: String,
    pub names: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PositiveRecord {
    pub id1: String,
    pub id2: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairRecord {
    pub id1: String,
    pub id2: String,
    pub label: u8,
}

/// A pair to score. Names may be given inline instead of through an
/// accounts file; a `label`, when present, is ignored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CandidateRecord {
    pub id1: String,
    pub id2: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub names1: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub names2: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<u8>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionRecord {
    pub id1: String,
    pub id2: String,
    pub probability: f64,
    pub label: u8,
    pub fusion: Vec<f64>,
}

pub fn read_jsonl<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>> {
    let file = fs::File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    let mut out = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.with_context(|| format!("cannot read {}", path.display()))?;
        if line.trim().is_empty() {
            continue;
        }
        let rec = serde_json::from_str(&line).with_context(|| format!("{}:{}", path.display(), i + 1))?;
        out.push(rec);
    }
    Ok(out)
}

pub fn write_jsonl<T: Serialize>(path: &Path, records: &[T]) -> Result<()> {
    let mut text = String::new();
    for r in records {
        text.push_str(&serde_json::to_string(r)?);
        text.push('\n');
    }
    write_file(path, &text)
}

/// Writes through a temporary buffer, creating parent directories.
pub fn write_file(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    }
    let file = fs::File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    let mut w = BufWriter::new(file);
    w.write_all(text.as_bytes())?;
    w.flush()?;
    Ok(())
}

/// Loads the eight tables from `dir`, or the bundled ones. A character-class
/// file in the same directory replaces the default classes.
pub fn load_transliterator(dir: Option<&Path>) -> Result<Transliterator> {
    let Some(dir) = dir else {
        return Ok(Transliterator::bundled());
    };
    let mut texts = Vec::with_capacity(TABLE_FILES.len());
    for name in TABLE_FILES {
        let path = dir.join(name);
        let text = fs::read_to_string(&path).with_context(|| format!("missing table file {}", path.display()))?;
        texts.push(text);
    }
    let classes_path = dir.join(CHAR_CLASS_FILE);
    let classes = if classes_path.exists() {
        let text = fs::read_to_string(&classes_path)?;
        CharClasses::parse(&text).with_context(|| classes_path.display().to_string())?
    } else {
        CharClasses::default()
    };
    let src = TableSources {
        hanyu: &texts[0],
        cantonese: &texts[1],
        tongyong: &texts[2],
        wadegiles: &texts[3],
        polyphone_family: &texts[4],
        polyphone_words: &texts[5],
        family_names: &texts[6],
        trad2simp: &texts[7],
    };
    Transliterator::from_sources(&src, classes).with_context(|| format!("tables in {}", dir.display()))
}

/// Accounts of both networks with id lookup.
#[derive(Debug, Clone)]
pub struct Corpus {
    pub first: Vec<Account>,
    pub second: Vec<Account>,
    pub l: usize,
    pub n: usize,
    index: [BTreeMap<String, usize>; 2],
}

impl Corpus {
    /// Builds the corpus. Slot counts default to the largest name count seen
    /// in each network.
    pub fn from_records(records: &[AccountRecord], slots: Option<(usize, usize)>, classes: &CharClasses) -> Result<Corpus> {
        let widest = |net: u8| {
            records
                .iter()
                .filter(|r| r.network == net)
                .map(|r| r.names.len())
                .max()
                .unwrap_or(0)
                .max(1)
        };
        let (l, n) = slots.unwrap_or_else(|| (widest(1), widest(2)));
        let mut corpus = Corpus {
            first: Vec::new(),
            second: Vec::new(),
            l,
            n,
            index: [BTreeMap::new(), BTreeMap::new()],
        };
        for r in records {
            let network = Network::from_id(r.network)
                .ok_or_else(|| anyhow!("account {}: network must be 1 or 2, got {}", r.id, r.network))?;
            let slots = if r.network == 1 { l } else { n };
            let names: Vec<&str> = r.names.iter().map(String::as_str).collect();
            let account = Account::from_raw(network, &r.id, &names, slots, classes)
                .with_context(|| format!("account {}", r.id))?;
            let (list, index) = match network {
                Network::First => (&mut corpus.first, &mut corpus.index[0]),
                Network::Second => (&mut corpus.second, &mut corpus.index[1]),
            };
            if index.insert(r.id.clone(), list.len()).is_some() {
                bail!("duplicate account id {} in network {}", r.id, r.network);
            }
            list.push(account);
        }
        Ok(corpus)
    }

    pub fn load(path: &Path, slots: Option<(usize, usize)>, classes: &CharClasses) -> Result<Corpus> {
        let records: Vec<AccountRecord> = read_jsonl(path)?;
        Corpus::from_records(&records, slots, classes).with_context(|| path.display().to_string())
    }

    pub fn resolve(&self, id1: &str, id2: &str) -> Result<PairKey> {
        let a = self.index[0]
            .get(id1)
            .ok_or_else(|| anyhow!("unknown network-1 account {id1}"))?;
        let b = self.index[1]
            .get(id2)
            .ok_or_else(|| anyhow!("unknown network-2 account {id2}"))?;
        Ok((*a, *b))
    }

    pub fn account(&self, network: Network, id: &str) -> Result<&Account> {
        let (list, index) = match network {
            Network::First => (&self.first, &self.index[0]),
            Network::Second => (&self.second, &self.index[1]),
        };
        let i = index
            .get(id)
            .ok_or_else(|| anyhow!("unknown network-{} account {id}", network.id()))?;
        Ok(&list[*i])
    }

    /// The evaluation dataset over the given positives, in file order.
    pub fn dataset(&self, positives: &[PositiveRecord]) -> Result<Dataset> {
        let mut keys = Vec::with_capacity(positives.len());
        for p in positives {
            keys.push(self.resolve(&p.id1, &p.id2)?);
        }
        let ds = Dataset {
            first: self.first.clone(),
            second: self.second.clone(),
            positives: keys,
            l: self.l,
            n: self.n,
        };
        ds.validate()?;
        Ok(ds)
    }
}

pub fn label_of(value: u8, what: &str) -> Result<bool> {
    match value {
        0 => Ok(false),
        1 => Ok(true),
        other => bail!("{what}: label must be 0 or 1, got {other}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(network: u8, id: &str, names: &[&str]) -> AccountRecord {
        AccountRecord {
            network,
            id: id.into(),
            names: names.iter().map(|s| s.to_string()).collect(),
        }
    }

    #[test]
    fn corpus_infers_slots_and_resolves_ids() {
        let records = [rec(1, "a", &["李雷"]), rec(2, "b", &["lilei", "lei"]), rec(2, "c", &["x"])];
        let c = Corpus::from_records(&records, None, &CharClasses::default()).unwrap();
        assert_eq!((c.l, c.n), (1, 2));
        assert_eq!(c.resolve("a", "c").unwrap(), (0, 1));
        assert!(c.resolve("b", "a").is_err());
        assert!(c.second[1].names[1].is_none());
    }

    #[test]
    fn corpus_rejects_bad_records() {
        let classes = CharClasses::default();
        assert!(Corpus::from_records(&[rec(3, "a", &["x"])], None, &classes).is_err());
        assert!(Corpus::from_records(&[rec(1, "a", &["x"]), rec(1, "a", &["y"])], None, &classes).is_err());
        assert!(Corpus::from_records(&[rec(1, "a", &["x", "y"])], Some((1, 1)), &classes).is_err());
    }

    #[test]
    fn missing_table_names_the_file() {
        let dir = tempfile::tempdir().unwrap();
        let err = load_transliterator(Some(dir.path())).unwrap_err();
        assert!(format!("{err:#}").contains("hanyu.tsv"));
    }
}
