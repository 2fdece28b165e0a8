//! Synthetic personas and per-network account names that exercise the
//! naming behaviours of bilingual users: romanization in one preferred
//! system, family-name-last order, abbreviation, decoration with digits and
//! symbols, traditional script, case and splitter jitter and homophones.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use rand::distributions::{Distribution, WeightedIndex};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::text::NameString;
use crate::translit::{RomanizationSystem, Transliterator};

/// How a single account name is derived from a persona.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Behavior {
    /// Romanized in the preferred system, sometimes family name last.
    Transliterate,
    /// A subsequence of the romanized name.
    Abbreviate,
    /// Romanized or Chinese name plus digits or symbols.
    Decorate,
    RawChinese,
    Traditional,
    /// Romanized with capitalized syllables or splitters.
    CaseJitter,
    /// One given-name letter swapped for a homophone.
    Homophone,
}

impl Behavior {
    pub const ALL: [Behavior; 7] = [
        Behavior::Transliterate,
        Behavior::Abbreviate,
        Behavior::Decorate,
        Behavior::RawChinese,
        Behavior::Traditional,
        Behavior::CaseJitter,
        Behavior::Homophone,
    ];

    /// Default sampling weights, in [`Behavior::ALL`] order.
    pub const DEFAULT_MIX: [f64; 7] = [0.30, 0.15, 0.15, 0.15, 0.10, 0.10, 0.05];
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenSpec {
    pub n_personas: usize,
    /// Names per account on the first and second network.
    pub l: usize,
    pub n: usize,
    pub seed: u64,
    pub mix: [f64; 7],
    /// Probability that a name is replaced by an unrelated random handle.
    pub noise_rate: f64,
    /// Draw family names from a small pool of common ones so unrelated
    /// personas often share them.
    pub hard_negatives: bool,
}

impl Default for GenSpec {
    fn default() -> Self {
        GenSpec {
            n_personas: 2000,
            l: 1,
            n: 2,
            seed: 7,
            mix: Behavior::DEFAULT_MIX,
            noise_rate: 0.05,
            hard_negatives: false,
        }
    }
}

impl GenSpec {
    pub fn validate(&self) -> Result<()> {
        if self.mix.iter().any(|w| w.is_nan() || *w < 0.0) || (self.mix.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
            return Err(Error::Config("behaviour weights must be non-negative and sum to 1".into()));
        }
        if !(0.0..1.0).contains(&self.noise_rate) {
            return Err(Error::Config(format!("noise rate must lie in [0, 1), got {}", self.noise_rate)));
        }
        if self.l == 0 || self.n == 0 {
            return Err(Error::Config("name slot counts must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Persona {
    pub family: String,
    pub given: String,
    pub preferred_system: RomanizationSystem,
    /// Digits this persona reuses when decorating names.
    pub lucky_number: String,
}

impl Persona {
    pub fn chinese_name(&self) -> String {
        format!("{}{}", self.family, self.given)
    }
}

/// Letter pools derived from the transliteration tables.
#[derive(Debug, Clone)]
pub struct NamePools {
    families: Vec<String>,
    common_families: Vec<String>,
    given: Vec<char>,
    homophones: BTreeMap<char, Vec<char>>,
    traditional: BTreeMap<char, char>,
}

const COMMON_FAMILIES: [&str; 10] = ["王", "李", "张", "刘", "陈", "杨", "黄", "赵", "吴", "周"];

impl NamePools {
    pub fn new(tr: &Transliterator) -> NamePools {
        let simplified = |c: char| tr.simplification().get(c).is_none();
        let families: Vec<String> = tr
            .family_names()
            .iter()
            .filter(|f| f.chars().all(simplified) && tr.covers(f))
            .collect();
        let family_letters: Vec<char> = tr.polyphones().family_letters().collect();
        let given: Vec<char> = tr
            .romanization()
            .letters()
            .filter(|&c| simplified(c) && !family_letters.contains(&c))
            .collect();
        let mut by_sound: BTreeMap<&str, Vec<char>> = BTreeMap::new();
        for &c in &given {
            if let Some(s) = tr.romanization().get(RomanizationSystem::HanyuPinyin, c) {
                by_sound.entry(s).or_default().push(c);
            }
        }
        let mut homophones = BTreeMap::new();
        for group in by_sound.values().filter(|g| g.len() > 1) {
            for &c in group {
                homophones.insert(c, group.iter().copied().filter(|&o| o != c).collect());
            }
        }
        let traditional = tr
            .simplification()
            .traditional_forms()
            .into_iter()
            .filter(|(_, t)| tr.romanization().contains(*t))
            .collect();
        let common_families = COMMON_FAMILIES
            .iter()
            .map(|s| s.to_string())
            .filter(|f| families.contains(f))
            .collect();
        NamePools {
            families,
            common_families,
            given,
            homophones,
            traditional,
        }
    }
}

/// Draws one persona.
pub fn gen_persona<R: Rng>(rng: &mut R, pools: &NamePools, hard_negatives: bool) -> Persona {
    let families = if hard_negatives && !pools.common_families.is_empty() {
        &pools.common_families
    } else {
        &pools.families
    };
    let family = families.choose(rng).expect("family pool is never empty").clone();
    let given_len = if rng.gen_bool(0.7) { 2 } else { 1 };
    let given: String = (0..given_len)
        .map(|_| *pools.given.choose(rng).expect("given-name pool is never empty"))
        .collect();
    let preferred_system = *RomanizationSystem::ALL.choose(rng).expect("four systems");
    let lucky_number = match rng.gen_range(0..3) {
        0 => format!("{}", rng.gen_range(60..100)),
        1 => format!("{}", rng.gen_range(1960..2005)),
        _ => format!("{}", rng.gen_range(1..1000)),
    };
    Persona {
        family,
        given,
        preferred_system,
        lucky_number,
    }
}

/// The romanized syllables of a persona's family and given names.
fn syllables(tr: &Transliterator, p: &Persona, sys: RomanizationSystem) -> (String, String) {
    let full = tr.transliterate(&p.chinese_name(), sys).text;
    let fam = tr.transliterate(&p.family, sys).text;
    // the family prefix reads the same alone as at the head of the name
    let given = full.strip_prefix(fam.as_str()).map_or_else(
        || tr.transliterate(&p.given, sys).text,
        |g| g.to_string(),
    );
    (fam, given)
}

fn capitalize(s: &str) -> String {
    let mut c = s.chars();
    match c.next() {
        Some(f) => f.to_ascii_uppercase().to_string() + c.as_str(),
        None => String::new(),
    }
}

fn random_handle<R: Rng>(rng: &mut R) -> String {
    const LETTERS: &[u8] = b"abcdefghijklmnopqrstuvwxyz";
    let len = rng.gen_range(4..10);
    let mut s: String = (0..len)
        .map(|_| LETTERS[rng.gen_range(0..LETTERS.len())] as char)
        .collect();
    if rng.gen_bool(0.5) {
        s.push_str(&format!("{}", rng.gen_range(0..100)));
    }
    s
}

/// One name under a given behaviour.
pub fn gen_name<R: Rng>(
    rng: &mut R,
    tr: &Transliterator,
    pools: &NamePools,
    p: &Persona,
    behavior: Behavior,
) -> String {
    let sys = p.preferred_system;
    let (fam, given) = syllables(tr, p, sys);
    match behavior {
        Behavior::Transliterate => {
            if rng.gen_bool(0.4) {
                format!("{given}{fam}")
            } else {
                format!("{fam}{given}")
            }
        }
        Behavior::Abbreviate => {
            let roman = format!("{fam}{given}");
            if rng.gen_bool(0.5) {
                // initials of the given syllables, family in full
                let initials: String = p
                    .given
                    .chars()
                    .filter_map(|c| tr.romanization().get(sys, c).and_then(|s| s.chars().next()))
                    .collect();
                if rng.gen_bool(0.5) {
                    format!("{initials}{fam}")
                } else {
                    format!("{fam}{initials}")
                }
            } else {
                let chars: Vec<char> = roman.chars().collect();
                let mut out = String::new();
                for (i, &c) in chars.iter().enumerate() {
                    if i == 0 || rng.gen_bool(0.6) {
                        out.push(c);
                    }
                }
                out
            }
        }
        Behavior::Decorate => {
            let base = if rng.gen_bool(0.5) {
                p.chinese_name()
            } else {
                format!("{fam}{given}")
            };
            match rng.gen_range(0..4) {
                0 => format!("{base}{}", p.lucky_number),
                1 => format!("{base}_{}", p.lucky_number),
                2 => format!("{base}{}", rng.gen_range(0..100)),
                _ => {
                    let sym = ["@", ".", "~", "-"][rng.gen_range(0..4)];
                    format!("{base}{sym}{}", p.lucky_number)
                }
            }
        }
        Behavior::RawChinese => p.chinese_name(),
        Behavior::Traditional => p
            .chinese_name()
            .chars()
            .map(|c| pools.traditional.get(&c).copied().unwrap_or(c))
            .collect(),
        Behavior::CaseJitter => {
            let (a, b) = if rng.gen_bool(0.3) { (&given, &fam) } else { (&fam, &given) };
            match rng.gen_range(0..4) {
                0 => format!("{}{}", capitalize(a), capitalize(b)),
                1 => format!("{}_{}", a, b),
                2 => format!("{} {}", capitalize(a), capitalize(b)),
                _ => format!("{}{}", a.to_ascii_uppercase(), b),
            }
        }
        Behavior::Homophone => {
            let mut letters: Vec<char> = p.given.chars().collect();
            let swappable: Vec<usize> = (0..letters.len())
                .filter(|i| pools.homophones.contains_key(&letters[*i]))
                .collect();
            if let Some(&i) = swappable.choose(rng) {
                letters[i] = *pools.homophones[&letters[i]].choose(rng).expect("non-empty group");
            }
            format!("{}{}", p.family, letters.into_iter().collect::<String>())
        }
    }
}

/// `slots` names for one account; every name is non-empty.
pub fn gen_account_names<R: Rng>(
    rng: &mut R,
    tr: &Transliterator,
    pools: &NamePools,
    p: &Persona,
    slots: usize,
    spec: &GenSpec,
) -> Vec<String> {
    let dist = WeightedIndex::new(spec.mix).expect("validated weights");
    (0..slots)
        .map(|_| {
            if spec.noise_rate > 0.0 && rng.gen_bool(spec.noise_rate) {
                return random_handle(rng);
            }
            let behavior = Behavior::ALL[dist.sample(rng)];
            let name = gen_name(rng, tr, pools, p, behavior);
            if name.is_empty() {
                p.chinese_name()
            } else {
                name
            }
        })
        .collect()
}

/// A generated account.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SynthAccount {
    pub id: String,
    pub names: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SynthDataset {
    pub personas: Vec<Persona>,
    pub first: Vec<SynthAccount>,
    pub second: Vec<SynthAccount>,
    /// Ids of aligned account pairs, one per persona.
    pub positives: Vec<(String, String)>,
}

pub fn gen_dataset(spec: &GenSpec, tr: &Transliterator) -> Result<SynthDataset> {
    spec.validate()?;
    let pools = NamePools::new(tr);
    if pools.families.is_empty() || pools.given.is_empty() {
        return Err(Error::Config("transliteration tables leave no letters to build names from".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let personas: Vec<Persona> = (0..spec.n_personas)
        .map(|_| gen_persona(&mut rng, &pools, spec.hard_negatives))
        .collect();
    let mut first = Vec::with_capacity(personas.len());
    let mut second = Vec::with_capacity(personas.len());
    let mut order: Vec<usize> = (0..personas.len()).collect();
    order.shuffle(&mut rng);
    for (i, p) in personas.iter().enumerate() {
        first.push(SynthAccount {
            id: format!("u1-{i:05}"),
            names: gen_account_names(&mut rng, tr, &pools, p, spec.l, spec),
        });
        second.push(SynthAccount {
            id: format!("u2-{:05}", order[i]),
            names: gen_account_names(&mut rng, tr, &pools, p, spec.n, spec),
        });
    }
    let positives = first
        .iter()
        .zip(&second)
        .map(|(a, b)| (a.id.clone(), b.id.clone()))
        .collect();
    second.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(SynthDataset {
        personas,
        first,
        second,
        positives,
    })
}

/// Whether every Cn name in the dataset is fully covered by the tables.
pub fn fully_covered(ds: &SynthDataset, tr: &Transliterator) -> bool {
    ds.first
        .iter()
        .chain(&ds.second)
        .flat_map(|a| &a.names)
        .all(|n| match NameString::new(n) {
            Ok(name) if name.is_cn() => tr.covers(n),
            _ => true,
        })
}
