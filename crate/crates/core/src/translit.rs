//! Romanization, polyphone resolution, family-name handling and
//! traditional to simplified conversion for Cn names.
//!
//! All tables are plain UTF-8 text, one record per line, `#` comments. The
//! bundled copies are compiled in; [`TableSources`] lets callers load their
//! own.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::ops::Range;

use crate::error::{Error, Result};
use crate::text::{lowercase, CharClasses, NameString};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RomanizationSystem {
    HanyuPinyin,
    Cantonese,
    TongyongPinyin,
    WadeGiles,
}

impl RomanizationSystem {
    /// Fixed order used everywhere feature indices depend on it.
    pub const ALL: [RomanizationSystem; 4] = [
        RomanizationSystem::HanyuPinyin,
        RomanizationSystem::Cantonese,
        RomanizationSystem::TongyongPinyin,
        RomanizationSystem::WadeGiles,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn short_name(self) -> &'static str {
        match self {
            RomanizationSystem::HanyuPinyin => "hy",
            RomanizationSystem::Cantonese => "ct",
            RomanizationSystem::TongyongPinyin => "ty",
            RomanizationSystem::WadeGiles => "wd",
        }
    }

    pub fn from_short_name(s: &str) -> Option<Self> {
        RomanizationSystem::ALL
            .into_iter()
            .find(|sys| sys.short_name() == s)
    }
}

impl fmt::Display for RomanizationSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            RomanizationSystem::HanyuPinyin => "Hanyu Pinyin",
            RomanizationSystem::Cantonese => "Cantonese",
            RomanizationSystem::TongyongPinyin => "Tongyong Pinyin",
            RomanizationSystem::WadeGiles => "Wade-Giles",
        };
        f.write_str(name)
    }
}

/// Raw text of every table file.
#[derive(Debug, Clone, Copy)]
pub struct TableSources<'a> {
    pub hanyu: &'a str,
    pub cantonese: &'a str,
    pub tongyong: &'a str,
    pub wadegiles: &'a str,
    pub polyphone_family: &'a str,
    pub polyphone_words: &'a str,
    pub family_names: &'a str,
    pub trad2simp: &'a str,
}

impl TableSources<'static> {
    pub const BUNDLED: TableSources<'static> = TableSources {
        hanyu: include_str!("../data/hanyu.tsv"),
        cantonese: include_str!("../data/cantonese.tsv"),
        tongyong: include_str!("../data/tongyong.tsv"),
        wadegiles: include_str!("../data/wadegiles.tsv"),
        polyphone_family: include_str!("../data/polyphone_family.tsv"),
        polyphone_words: include_str!("../data/polyphone_words.tsv"),
        family_names: include_str!("../data/family_names.txt"),
        trad2simp: include_str!("../data/trad2simp.tsv"),
    };
}

/// File names of the tables, in [`TableSources`] field order.
pub const TABLE_FILES: [&str; 8] = [
    "hanyu.tsv",
    "cantonese.tsv",
    "tongyong.tsv",
    "wadegiles.tsv",
    "polyphone_family.tsv",
    "polyphone_words.tsv",
    "family_names.txt",
    "trad2simp.tsv",
];

/// Non-empty, non-comment lines with their 1-based line numbers.
fn records(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
        .filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'))
}

fn version_of(text: &str) -> String {
    text.lines()
        .filter_map(|l| l.strip_prefix('#'))
        .find_map(|l| l.trim().strip_prefix("version "))
        .map(|v| v.trim().to_string())
        .unwrap_or_else(|| "unversioned".to_string())
}

fn table_err(table: &'static str, line: usize, message: &str) -> Error {
    Error::Table {
        table,
        line,
        message: message.to_string(),
    }
}

fn check_syllable(table: &'static str, line: usize, s: &str) -> Result<String> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_lowercase()) {
        return Err(table_err(
            table,
            line,
            &format!("syllable {s:?} is not lowercase ASCII"),
        ));
    }
    Ok(s.to_string())
}

fn single_char(table: &'static str, line: usize, s: &str) -> Result<char> {
    let mut it = s.chars();
    match (it.next(), it.next()) {
        (Some(c), None) => Ok(c),
        _ => Err(table_err(table, line, &format!("expected one letter, got {s:?}"))),
    }
}

/// `H_c`: one syllable per letter for each system.
#[derive(Debug, Clone, Default)]
pub struct RomanizationTable {
    syllables: [BTreeMap<char, String>; 4],
}

impl RomanizationTable {
    fn parse_system(
        &mut self,
        system: RomanizationSystem,
        table: &'static str,
        text: &str,
    ) -> Result<()> {
        let map = &mut self.syllables[system.index()];
        for (line, rec) in records(text) {
            let (letter, syllable) = rec
                .split_once('\t')
                .ok_or_else(|| table_err(table, line, "expected letter<TAB>syllable"))?;
            let letter = single_char(table, line, letter)?;
            let syllable = check_syllable(table, line, syllable.trim())?;
            if map.insert(letter, syllable).is_some() {
                return Err(table_err(table, line, "duplicate letter"));
            }
        }
        Ok(())
    }

    pub fn get(&self, system: RomanizationSystem, letter: char) -> Option<&str> {
        self.syllables[system.index()].get(&letter).map(String::as_str)
    }

    pub fn contains(&self, letter: char) -> bool {
        self.syllables
            .iter()
            .all(|m| m.contains_key(&letter))
    }

    /// Letters covered by every system, in codepoint order.
    pub fn letters(&self) -> impl Iterator<Item = char> + '_ {
        self.syllables[0]
            .keys()
            .copied()
            .filter(move |&c| self.contains(c))
    }
}

/// `S_F`: one- or two-letter family names.
#[derive(Debug, Clone, Default)]
pub struct FamilyNameSet {
    names: BTreeSet<Vec<char>>,
    longest: usize,
}

impl FamilyNameSet {
    fn parse(text: &str) -> Result<Self> {
        let mut set = FamilyNameSet::default();
        for (line, rec) in records(text) {
            let name: Vec<char> = rec.trim().chars().collect();
            if name.is_empty() || name.len() > 2 {
                return Err(table_err("family_names.txt", line, "family names have 1 or 2 letters"));
            }
            set.longest = set.longest.max(name.len());
            set.names.insert(name);
        }
        if set.names.is_empty() {
            return Err(table_err("family_names.txt", 0, "no family names"));
        }
        Ok(set)
    }

    pub fn contains(&self, name: &str) -> bool {
        let v: Vec<char> = name.chars().collect();
        self.names.contains(&v)
    }

    /// Length of the longest member that prefixes `letters`.
    pub fn longest_prefix(&self, letters: &[char]) -> Option<usize> {
        (1..=self.longest.min(letters.len()))
            .rev()
            .find(|&len| self.names.contains(&letters[..len]))
    }

    pub fn iter(&self) -> impl Iterator<Item = String> + '_ {
        self.names.iter().map(|n| n.iter().collect())
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
}

/// `H_f` and `H_w`.
#[derive(Debug, Clone, Default)]
pub struct PolyphoneTables {
    family: BTreeMap<char, [String; 4]>,
    words: BTreeMap<Vec<char>, [Vec<String>; 4]>,
    longest_word: usize,
}

impl PolyphoneTables {
    fn parse(family_text: &str, words_text: &str) -> Result<Self> {
        let mut tables = PolyphoneTables::default();
        const HF: &str = "polyphone_family.tsv";
        for (line, rec) in records(family_text) {
            let cols: Vec<&str> = rec.split('\t').collect();
            if cols.len() != 5 {
                return Err(table_err(HF, line, "expected letter and 4 syllables"));
            }
            let letter = single_char(HF, line, cols[0])?;
            let mut syl: [String; 4] = Default::default();
            for k in 0..4 {
                syl[k] = check_syllable(HF, line, cols[k + 1].trim())?;
            }
            if tables.family.insert(letter, syl).is_some() {
                return Err(table_err(HF, line, "duplicate letter"));
            }
        }
        const HW: &str = "polyphone_words.tsv";
        for (line, rec) in records(words_text) {
            let cols: Vec<&str> = rec.split('\t').collect();
            if cols.len() != 5 {
                return Err(table_err(HW, line, "expected word and 4 syllable sequences"));
            }
            let word: Vec<char> = cols[0].chars().collect();
            if word.is_empty() {
                return Err(table_err(HW, line, "empty word"));
            }
            let mut syl: [Vec<String>; 4] = Default::default();
            for k in 0..4 {
                let seq = cols[k + 1]
                    .split(' ')
                    .filter(|s| !s.is_empty())
                    .map(|s| check_syllable(HW, line, s))
                    .collect::<Result<Vec<_>>>()?;
                if seq.len() != word.len() {
                    return Err(table_err(HW, line, "one syllable per letter expected"));
                }
                syl[k] = seq;
            }
            tables.longest_word = tables.longest_word.max(word.len());
            if tables.words.insert(word, syl).is_some() {
                return Err(table_err(HW, line, "duplicate word"));
            }
        }
        Ok(tables)
    }

    pub fn family_syllable(&self, system: RomanizationSystem, letter: char) -> Option<&str> {
        self.family
            .get(&letter)
            .map(|s| s[system.index()].as_str())
    }

    pub fn word_syllables(&self, system: RomanizationSystem, word: &[char]) -> Option<&[String]> {
        self.words.get(word).map(|s| s[system.index()].as_slice())
    }

    pub fn family_letters(&self) -> impl Iterator<Item = char> + '_ {
        self.family.keys().copied()
    }

    pub fn words(&self) -> impl Iterator<Item = String> + '_ {
        self.words.keys().map(|w| w.iter().collect())
    }
}

/// `T_c`: traditional letter to simplified letter.
#[derive(Debug, Clone, Default)]
pub struct SimplificationTable {
    map: BTreeMap<char, char>,
}

impl SimplificationTable {
    fn parse(text: &str, classes: &CharClasses) -> Result<Self> {
        const TC: &str = "trad2simp.tsv";
        let mut map = BTreeMap::new();
        for (line, rec) in records(text) {
            let (trad, simp) = rec
                .split_once('\t')
                .ok_or_else(|| table_err(TC, line, "expected traditional<TAB>simplified"))?;
            let trad = single_char(TC, line, trad)?;
            let simp = single_char(TC, line, simp.trim())?;
            if !classes.is_chinese(trad) || !classes.is_chinese(simp) {
                return Err(table_err(TC, line, "both sides must be Chinese letters"));
            }
            if map.insert(trad, simp).is_some() {
                return Err(table_err(TC, line, "duplicate letter"));
            }
        }
        // simplify(simplify(x)) == simplify(x)
        for (&trad, &simp) in &map {
            if let Some(&again) = map.get(&simp) {
                if again != simp {
                    return Err(Error::Table {
                        table: TC,
                        line: 0,
                        message: format!("{trad} maps to {simp}, which maps on to {again}"),
                    });
                }
            }
        }
        Ok(SimplificationTable { map })
    }

    pub fn get(&self, letter: char) -> Option<char> {
        self.map.get(&letter).copied()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// Traditional forms per simplified letter; the smallest codepoint wins
    /// when several traditional letters share one simplified form.
    pub fn traditional_forms(&self) -> BTreeMap<char, char> {
        let mut out = BTreeMap::new();
        for (&trad, &simp) in &self.map {
            out.entry(simp).or_insert(trad);
        }
        out
    }
}

/// Output of one romanization call.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Romanized {
    pub text: String,
    /// Chinese letters no table covered; they pass through verbatim.
    pub unmapped: usize,
}

/// Where the detected family name sits inside a name, in char indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilySpan {
    pub range: Range<usize>,
    /// End of the Chinese-letter run the family name prefixes.
    pub run_end: usize,
}

/// All transliteration tables plus the character classes used to find
/// Chinese letters.
#[derive(Debug, Clone)]
pub struct Transliterator {
    classes: CharClasses,
    romanization: RomanizationTable,
    family_names: FamilyNameSet,
    polyphones: PolyphoneTables,
    simplification: SimplificationTable,
    versions: Vec<(&'static str, String)>,
}

impl Transliterator {
    /// The compiled-in tables.
    pub fn bundled() -> Self {
        Transliterator::from_sources(&TableSources::BUNDLED, CharClasses::default())
            .expect("bundled tables are valid")
    }

    pub fn from_sources(src: &TableSources<'_>, classes: CharClasses) -> Result<Self> {
        let mut romanization = RomanizationTable::default();
        romanization.parse_system(RomanizationSystem::HanyuPinyin, "hanyu.tsv", src.hanyu)?;
        romanization.parse_system(RomanizationSystem::Cantonese, "cantonese.tsv", src.cantonese)?;
        romanization.parse_system(RomanizationSystem::TongyongPinyin, "tongyong.tsv", src.tongyong)?;
        romanization.parse_system(RomanizationSystem::WadeGiles, "wadegiles.tsv", src.wadegiles)?;
        for (name, map) in TABLE_FILES.iter().zip(romanization.syllables.iter()) {
            if let Some(&c) = map.keys().find(|&&c| !classes.is_chinese(c)) {
                return Err(table_err(name, 0, &format!("{c:?} is not a Chinese letter")));
            }
        }
        let family_names = FamilyNameSet::parse(src.family_names)?;
        let polyphones = PolyphoneTables::parse(src.polyphone_family, src.polyphone_words)?;
        for letter in polyphones.family_letters() {
            let mut buf = [0u8; 4];
            if !family_names.contains(letter.encode_utf8(&mut buf)) {
                return Err(table_err(
                    "polyphone_family.tsv",
                    0,
                    &format!("{letter} is not in the family-name set"),
                ));
            }
        }
        for (word, syl) in &polyphones.words {
            let changes_a_reading = word.iter().enumerate().any(|(i, &c)| {
                RomanizationSystem::ALL
                    .iter()
                    .any(|&sys| romanization.get(sys, c) != Some(syl[sys.index()][i].as_str()))
            });
            if !changes_a_reading {
                let w: String = word.iter().collect();
                return Err(table_err(
                    "polyphone_words.tsv",
                    0,
                    &format!("{w} reads the same as its letters do on their own"),
                ));
            }
        }
        let simplification = SimplificationTable::parse(src.trad2simp, &classes)?;
        let texts = [
            src.hanyu,
            src.cantonese,
            src.tongyong,
            src.wadegiles,
            src.polyphone_family,
            src.polyphone_words,
            src.family_names,
            src.trad2simp,
        ];
        let versions = TABLE_FILES
            .iter()
            .zip(texts)
            .map(|(&name, text)| (name, version_of(text)))
            .collect();
        Ok(Transliterator {
            classes,
            romanization,
            family_names,
            polyphones,
            simplification,
            versions,
        })
    }

    pub fn classes(&self) -> &CharClasses {
        &self.classes
    }

    pub fn romanization(&self) -> &RomanizationTable {
        &self.romanization
    }

    pub fn family_names(&self) -> &FamilyNameSet {
        &self.family_names
    }

    pub fn polyphones(&self) -> &PolyphoneTables {
        &self.polyphones
    }

    pub fn simplification(&self) -> &SimplificationTable {
        &self.simplification
    }

    /// `(file name, version)` for every table.
    pub fn versions(&self) -> &[(&'static str, String)] {
        &self.versions
    }

    /// `Ts(n)`: traditional letters replaced through `T_c`.
    pub fn simplify(&self, name: &str) -> String {
        name.chars()
            .map(|c| self.simplification.get(c).unwrap_or(c))
            .collect()
    }

    fn require_cn(&self, name: &NameString) -> Result<()> {
        if name.is_cn() {
            Ok(())
        } else {
            Err(Error::TypeMismatch("expected a Cn name"))
        }
    }

    /// Family name at the start of the first run of Chinese letters.
    fn family_span(&self, letters: &[char]) -> Option<FamilySpan> {
        let start = letters.iter().position(|&c| self.classes.is_chinese(c))?;
        let run_end = letters[start..]
            .iter()
            .position(|&c| !self.classes.is_chinese(c))
            .map_or(letters.len(), |p| start + p);
        let len = self.family_names.longest_prefix(&letters[start..run_end])?;
        Some(FamilySpan {
            range: start..start + len,
            run_end,
        })
    }

    pub fn detect_family(&self, name: &NameString) -> Result<Option<String>> {
        self.require_cn(name)?;
        let letters: Vec<char> = name.as_str().chars().collect();
        Ok(self
            .family_span(&letters)
            .map(|span| letters[span.range].iter().collect()))
    }

    /// `ṅ`: the name with its family name moved to the end of its
    /// Chinese-letter run, or `None` when no family name is found.
    pub fn reorder_family(&self, name: &NameString) -> Result<Option<String>> {
        self.require_cn(name)?;
        let letters: Vec<char> = name.as_str().chars().collect();
        Ok(self
            .family_span(&letters)
            .map(|span| reorder(&letters, &span).0.into_iter().collect()))
    }

    /// Romanizes a name, treating a family name at the start of its first
    /// Chinese run as the family position.
    pub fn transliterate(&self, name: &str, system: RomanizationSystem) -> Romanized {
        let letters: Vec<char> = name.chars().collect();
        let family = self.family_span(&letters).map(|s| s.range);
        self.romanize(&letters, family, system)
    }

    fn romanize(
        &self,
        letters: &[char],
        family: Option<Range<usize>>,
        system: RomanizationSystem,
    ) -> Romanized {
        let mut text = String::with_capacity(letters.len() * 4);
        let mut unmapped = 0;
        let mut push_letter = |text: &mut String, c: char, from_family: bool| {
            let syllable = if from_family {
                self.polyphones
                    .family_syllable(system, c)
                    .or_else(|| self.romanization.get(system, c))
            } else {
                self.romanization.get(system, c)
            };
            match syllable {
                Some(s) => text.push_str(s),
                None => {
                    unmapped += 1;
                    text.push(c);
                }
            }
        };
        let mut i = 0;
        while i < letters.len() {
            let c = letters[i];
            if !self.classes.is_chinese(c) {
                text.push(c);
                i += 1;
                continue;
            }
            if let Some(fam) = family.as_ref().filter(|r| r.contains(&i)) {
                for &f in &letters[i..fam.end] {
                    push_letter(&mut text, f, true);
                }
                i = fam.end;
                continue;
            }
            // words never cross a non-Chinese letter or the family name
            let mut limit = letters.len();
            if let Some(p) = letters[i..].iter().position(|&c| !self.classes.is_chinese(c)) {
                limit = limit.min(i + p);
            }
            if let Some(fam) = family.as_ref().filter(|r| r.start > i) {
                limit = limit.min(fam.start);
            }
            let longest = self.polyphones.longest_word.min(limit - i);
            let word = (1..=longest).rev().find_map(|len| {
                self.polyphones
                    .word_syllables(system, &letters[i..i + len])
                    .map(|syl| (len, syl))
            });
            match word {
                Some((len, syllables)) => {
                    for s in syllables {
                        text.push_str(s);
                    }
                    i += len;
                }
                None => {
                    push_letter(&mut text, c, false);
                    i += 1;
                }
            }
        }
        Romanized { text, unmapped }
    }

    /// The eight phonetic forms, ordered
    /// `[Hy(n), Ct(n), Ty(n), Wd(n), Hy(ṅ), Ct(ṅ), Ty(ṅ), Wd(ṅ)]`.
    /// Without a family name the last four repeat the first four.
    pub fn phonetic_forms_ce(&self, name: &NameString) -> Result<[String; 8]> {
        self.require_cn(name)?;
        let letters: Vec<char> = name.as_str().chars().collect();
        let span = self.family_span(&letters);
        let mut forms: [String; 8] = Default::default();
        for sys in RomanizationSystem::ALL {
            forms[sys.index()] = self
                .romanize(&letters, span.as_ref().map(|s| s.range.clone()), sys)
                .text;
        }
        match span {
            Some(span) => {
                let (moved, fam) = reorder(&letters, &span);
                for sys in RomanizationSystem::ALL {
                    forms[4 + sys.index()] = self.romanize(&moved, Some(fam.clone()), sys).text;
                }
            }
            None => {
                for k in 0..4 {
                    forms[4 + k] = forms[k].clone();
                }
            }
        }
        Ok(forms)
    }

    /// The five CC transforms `[Ts, Hy, Ct, Ty, Wd]` with English letters
    /// lowercased. Family order is left alone.
    pub fn transforms_cc(&self, name: &NameString) -> Result<[String; 5]> {
        self.require_cn(name)?;
        Ok(self.transforms_cc_unchecked(name.as_str()))
    }

    pub(crate) fn transforms_cc_unchecked(&self, name: &str) -> [String; 5] {
        let letters: Vec<char> = name.chars().collect();
        let family = self.family_span(&letters).map(|s| s.range);
        let mut out: [String; 5] = Default::default();
        out[0] = lowercase(&self.simplify(name));
        for sys in RomanizationSystem::ALL {
            out[1 + sys.index()] = lowercase(&self.romanize(&letters, family.clone(), sys).text);
        }
        out
    }

    pub(crate) fn phonetic_forms_unchecked(&self, name: &str) -> [String; 8] {
        match self.classes.name(name) {
            Ok(n) if n.is_cn() => self.phonetic_forms_ce(&n).expect("checked Cn"),
            _ => core::array::from_fn(|_| name.to_string()),
        }
    }

    /// Whether every Chinese letter of `name` has a syllable in all four
    /// systems.
    pub fn covers(&self, name: &str) -> bool {
        name.chars()
            .filter(|&c| self.classes.is_chinese(c))
            .all(|c| self.romanization.contains(c))
    }
}

/// Moves the family letters to the end of their run. Returns the new
/// letters and the family's new range.
fn reorder(letters: &[char], span: &FamilySpan) -> (Vec<char>, Range<usize>) {
    let fam = &letters[span.range.clone()];
    let mut out = Vec::with_capacity(letters.len());
    out.extend_from_slice(&letters[..span.range.start]);
    out.extend_from_slice(&letters[span.range.end..span.run_end]);
    let start = out.len();
    out.extend_from_slice(fam);
    out.extend_from_slice(&letters[span.run_end..]);
    (out, start..start + fam.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t() -> Transliterator {
        Transliterator::bundled()
    }

    fn cn(s: &str) -> NameString {
        NameString::new(s).unwrap()
    }

    #[test]
    fn bundled_tables_load() {
        let tr = t();
        assert!(tr.romanization().letters().count() >= 500);
        assert!(tr.family_names().contains("李"));
        assert!(!tr.family_names().contains("雷"));
        assert!(tr.family_names().contains("欧阳"));
        assert_eq!(tr.versions().len(), 8);
        assert!(tr.versions().iter().all(|(_, v)| v != "unversioned"));
    }

    #[test]
    fn simplify_examples() {
        let tr = t();
        assert_eq!(tr.simplify("龍"), "龙");
        assert_eq!(tr.simplify("李雷"), "李雷");
        assert_eq!(tr.simplify("Mr.龍88"), "Mr.龙88");
    }

    #[test]
    fn family_detection() {
        let tr = t();
        assert_eq!(tr.detect_family(&cn("李雷")).unwrap().as_deref(), Some("李"));
        assert_eq!(tr.detect_family(&cn("雷李")).unwrap(), None);
        assert_eq!(tr.detect_family(&cn("欧阳娜娜")).unwrap().as_deref(), Some("欧阳"));
        assert_eq!(tr.detect_family(&cn("Mr.李雷")).unwrap().as_deref(), Some("李"));
        assert!(matches!(
            tr.detect_family(&cn("JackWu")),
            Err(Error::TypeMismatch(_))
        ));
    }

    #[test]
    fn family_reordering() {
        let tr = t();
        assert_eq!(tr.reorder_family(&cn("李雷")).unwrap().as_deref(), Some("雷李"));
        assert_eq!(tr.reorder_family(&cn("雷雷")).unwrap(), None);
        assert_eq!(tr.reorder_family(&cn("李雷雷")).unwrap().as_deref(), Some("雷雷李"));
        assert_eq!(
            tr.reorder_family(&cn("Dr.李雷88")).unwrap().as_deref(),
            Some("Dr.雷李88")
        );
    }

    #[test]
    fn transliterate_examples() {
        let tr = t();
        let hy = RomanizationSystem::HanyuPinyin;
        assert_eq!(tr.transliterate("李雷", hy).text, "lilei");
        assert_eq!(tr.transliterate("abc", hy).text, "abc");
        assert_eq!(tr.transliterate("行", hy).text, "xing");
        assert_eq!(tr.transliterate("银行", hy).text, "yinhang");
        assert_eq!(tr.transliterate("Mr.李雷_88", hy).text, "Mr.lilei_88");
    }

    #[test]
    fn family_polyphones() {
        let tr = t();
        let hy = RomanizationSystem::HanyuPinyin;
        // 单 reads dan on its own and shan as a family name
        assert_eq!(tr.transliterate("丹单", hy).text, "dandan");
        assert_eq!(tr.transliterate("单丹", hy).text, "shandan");
        assert_eq!(tr.transliterate("曾伟", hy).text, "zengwei");
        // after the family slot is consumed, words are matched on the rest
        assert_eq!(tr.transliterate("曾长江", hy).text, "zengchangjiang");
    }

    #[test]
    fn unmapped_letters_pass_through() {
        let tr = t();
        let r = tr.transliterate("李龘", RomanizationSystem::HanyuPinyin);
        assert_eq!(r.text, "li龘");
        assert_eq!(r.unmapped, 1);
    }

    #[test]
    fn phonetic_forms() {
        let tr = t();
        let forms = tr.phonetic_forms_ce(&cn("李雷")).unwrap();
        assert_eq!(forms[0], "lilei");
        assert_eq!(forms[4], "leili");
        let forms = tr.phonetic_forms_ce(&cn("雷雷")).unwrap();
        assert_eq!(forms[..4], forms[4..]);
        // the family polyphone keeps its family reading after the move
        let forms = tr.phonetic_forms_ce(&cn("单丹")).unwrap();
        assert_eq!(forms[0], "shandan");
        assert_eq!(forms[4], "danshan");
        assert!(tr.phonetic_forms_ce(&cn("lilei")).is_err());
    }

    #[test]
    fn cc_transforms() {
        let tr = t();
        let out = tr.transforms_cc(&cn("龍")).unwrap();
        assert_eq!(out[0], "龙");
        assert_eq!(out[1], "long");
        let out = tr.transforms_cc(&cn("ABC李")).unwrap();
        assert_eq!(out[0], "abc李");
        assert_eq!(out[1], "abcli");
        assert_eq!(tr.transforms_cc(&cn("李雷")).unwrap()[0], "李雷");
    }

    #[test]
    fn rejects_broken_tables() {
        let mut src = TableSources::BUNDLED;
        src.hanyu = "李\tLI\n";
        assert!(matches!(
            Transliterator::from_sources(&src, CharClasses::default()),
            Err(Error::Table { table: "hanyu.tsv", line: 1, .. })
        ));
        let mut src = TableSources::BUNDLED;
        src.trad2simp = "龍\t龙\n龙\t竜\n";
        assert!(Transliterator::from_sources(&src, CharClasses::default()).is_err());
        let mut src = TableSources::BUNDLED;
        src.polyphone_family = "雷\tlei\tlui\tlei\tlei\n";
        assert!(Transliterator::from_sources(&src, CharClasses::default()).is_err());
        let mut src = TableSources::BUNDLED;
        src.polyphone_words = "李雷\tli lei\tlei lui\tli lei\tli lei\n";
        assert!(Transliterator::from_sources(&src, CharClasses::default()).is_err());
    }
}
