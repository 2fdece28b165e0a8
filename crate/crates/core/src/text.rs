//! Character classes, name typing and the string normalizations every
//! feature is built on.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// CJK Unified Ideographs and Extension A.
pub const DEFAULT_CHINESE_RANGES: [(u32, u32); 2] = [(0x4E00, 0x9FFF), (0x3400, 0x4DBF)];

/// Space and underscore.
pub const DEFAULT_SPLITTERS: [char; 2] = [' ', '_'];

/// The class of a single codepoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CharClass {
    ChineseLetter,
    EnglishLetter,
    WordSplitter,
    SpecialSymbol,
}

/// Configurable codepoint classifier.
///
/// The defaults cover the basic and Extension A ideograph blocks, with space
/// and underscore as word splitters. Everything that is neither a Chinese
/// letter, an ASCII letter nor a splitter is a special symbol, including
/// digits, punctuation and letters of other scripts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharClasses {
    chinese_ranges: Vec<(u32, u32)>,
    splitters: Vec<char>,
}

impl Default for CharClasses {
    fn default() -> Self {
        CharClasses {
            chinese_ranges: DEFAULT_CHINESE_RANGES.to_vec(),
            splitters: DEFAULT_SPLITTERS.to_vec(),
        }
    }
}

impl CharClasses {
    pub fn new(chinese_ranges: Vec<(u32, u32)>, splitters: Vec<char>) -> Result<Self> {
        if let Some(&(lo, hi)) = chinese_ranges.iter().find(|(lo, hi)| lo > hi) {
            return Err(Error::Config(format!("empty range {lo:04X}-{hi:04X}")));
        }
        for &c in &splitters {
            if c.is_ascii_alphabetic() || in_ranges(&chinese_ranges, c) {
                return Err(Error::Config(format!("splitter {c:?} is already a letter")));
            }
        }
        Ok(CharClasses {
            chinese_ranges,
            splitters,
        })
    }

    /// Parses the key-value config format:
    ///
    /// ```text
    /// version = 1
    /// chinese = 4E00-9FFF, 3400-4DBF
    /// splitters = 0020, 005F
    /// ```
    ///
    /// Missing keys keep their defaults. Codepoints are hexadecimal.
    pub fn parse(text: &str) -> Result<Self> {
        let mut classes = CharClasses::default();
        let mut saw_version = false;
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |msg: &str| Error::Config(format!("line {}: {msg}", idx + 1));
            let (key, value) = line.split_once('=').ok_or_else(|| bad("expected key = value"))?;
            let value = value.trim();
            match key.trim() {
                "version" => {
                    if value != "1" {
                        return Err(bad("unsupported version"));
                    }
                    saw_version = true;
                }
                "chinese" => {
                    let mut ranges = Vec::new();
                    for item in value.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                        let (lo, hi) = item.split_once('-').unwrap_or((item, item));
                        let lo = parse_hex(lo).ok_or_else(|| bad("bad codepoint"))?;
                        let hi = parse_hex(hi).ok_or_else(|| bad("bad codepoint"))?;
                        ranges.push((lo, hi));
                    }
                    classes.chinese_ranges = ranges;
                }
                "splitters" => {
                    let mut splitters = Vec::new();
                    for item in value.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                        let c = parse_hex(item)
                            .and_then(char::from_u32)
                            .ok_or_else(|| bad("bad codepoint"))?;
                        splitters.push(c);
                    }
                    classes.splitters = splitters;
                }
                _ => return Err(bad("unknown key")),
            }
        }
        if !saw_version {
            return Err(Error::Config("missing version".to_string()));
        }
        CharClasses::new(classes.chinese_ranges, classes.splitters)
    }

    pub fn to_config_string(&self) -> String {
        let ranges: Vec<String> = self
            .chinese_ranges
            .iter()
            .map(|(lo, hi)| format!("{lo:04X}-{hi:04X}"))
            .collect();
        let splitters: Vec<String> = self
            .splitters
            .iter()
            .map(|&c| format!("{:04X}", c as u32))
            .collect();
        format!(
            "version = 1\nchinese = {}\nsplitters = {}\n",
            ranges.join(", "),
            splitters.join(", ")
        )
    }

    #[inline]
    pub fn classify(&self, c: char) -> CharClass {
        if c.is_ascii_alphabetic() {
            CharClass::EnglishLetter
        } else if in_ranges(&self.chinese_ranges, c) {
            CharClass::ChineseLetter
        } else if self.splitters.contains(&c) {
            CharClass::WordSplitter
        } else {
            CharClass::SpecialSymbol
        }
    }

    pub fn is_chinese(&self, c: char) -> bool {
        in_ranges(&self.chinese_ranges, c)
    }

    /// Builds a typed name; fails on the empty string.
    pub fn name(&self, raw: &str) -> Result<NameString> {
        if raw.is_empty() {
            return Err(Error::EmptyName);
        }
        let name_type = if raw.chars().any(|c| self.is_chinese(c)) {
            NameType::Cn
        } else {
            NameType::En
        };
        Ok(NameString {
            raw: raw.to_string(),
            name_type,
        })
    }

    pub fn strip_splitters(&self, s: &str) -> String {
        s.chars()
            .filter(|&c| self.classify(c) != CharClass::WordSplitter)
            .collect()
    }

    /// `sp(n)`: special symbols and splitters in their original order.
    pub fn special_string(&self, s: &str) -> String {
        s.chars()
            .filter(|&c| {
                matches!(
                    self.classify(c),
                    CharClass::SpecialSymbol | CharClass::WordSplitter
                )
            })
            .collect()
    }

    /// `ns(n)`: Chinese and English letters in their original order.
    pub fn non_special_string(&self, s: &str) -> String {
        s.chars()
            .filter(|&c| {
                matches!(
                    self.classify(c),
                    CharClass::ChineseLetter | CharClass::EnglishLetter
                )
            })
            .collect()
    }

    /// `el(n)`: English letters only.
    pub fn english_letters(&self, s: &str) -> String {
        s.chars().filter(char::is_ascii_alphabetic).collect()
    }
}

fn in_ranges(ranges: &[(u32, u32)], c: char) -> bool {
    let cp = c as u32;
    ranges.iter().any(|&(lo, hi)| lo <= cp && cp <= hi)
}

fn parse_hex(s: &str) -> Option<u32> {
    let s = s.trim();
    let s = s
        .strip_prefix("U+")
        .or_else(|| s.strip_prefix("0x"))
        .unwrap_or(s);
    u32::from_str_radix(s, 16).ok()
}

/// Classifies a codepoint with the default classes.
pub fn classify_char(c: char) -> CharClass {
    if c.is_ascii_alphabetic() {
        CharClass::EnglishLetter
    } else if in_ranges(&DEFAULT_CHINESE_RANGES, c) {
        CharClass::ChineseLetter
    } else if DEFAULT_SPLITTERS.contains(&c) {
        CharClass::WordSplitter
    } else {
        CharClass::SpecialSymbol
    }
}

/// Maps A-Z to a-z and leaves every other codepoint alone.
pub fn lowercase(s: &str) -> String {
    s.chars().map(|c| c.to_ascii_lowercase()).collect()
}

pub fn strip_splitters(s: &str) -> String {
    s.chars()
        .filter(|&c| classify_char(c) != CharClass::WordSplitter)
        .collect()
}

pub fn special_string(s: &str) -> String {
    s.chars()
        .filter(|&c| {
            matches!(
                classify_char(c),
                CharClass::SpecialSymbol | CharClass::WordSplitter
            )
        })
        .collect()
}

pub fn non_special_string(s: &str) -> String {
    s.chars()
        .filter(|&c| {
            matches!(
                classify_char(c),
                CharClass::ChineseLetter | CharClass::EnglishLetter
            )
        })
        .collect()
}

pub fn english_letters(s: &str) -> String {
    s.chars().filter(char::is_ascii_alphabetic).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NameType {
    /// No Chinese letters.
    En,
    /// At least one Chinese letter.
    Cn,
}

/// An account name together with its En/Cn type.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NameString {
    raw: String,
    name_type: NameType,
}

impl NameString {
    /// Classifies `raw` with the default character classes.
    pub fn new(raw: &str) -> Result<Self> {
        if raw.is_empty() {
            return Err(Error::EmptyName);
        }
        let name_type = if raw
            .chars()
            .any(|c| classify_char(c) == CharClass::ChineseLetter)
        {
            NameType::Cn
        } else {
            NameType::En
        };
        Ok(NameString {
            raw: raw.to_string(),
            name_type,
        })
    }

    pub fn as_str(&self) -> &str {
        &self.raw
    }

    pub fn name_type(&self) -> NameType {
        self.name_type
    }

    pub fn is_cn(&self) -> bool {
        self.name_type == NameType::Cn
    }
}

impl fmt::Display for NameString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.raw)
    }
}

/// Classifies a raw name with the default classes.
pub fn classify_name(raw: &str) -> Result<NameString> {
    NameString::new(raw)
}

/// Which feature schema and model a name pair is routed to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MatchingType {
    EE,
    CE,
    CC,
}

impl MatchingType {
    pub const ALL: [MatchingType; 3] = [MatchingType::EE, MatchingType::CE, MatchingType::CC];

    pub fn as_str(self) -> &'static str {
        match self {
            MatchingType::EE => "EE",
            MatchingType::CE => "CE",
            MatchingType::CC => "CC",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "EE" | "ee" => Some(MatchingType::EE),
            "CE" | "ce" => Some(MatchingType::CE),
            "CC" | "cc" => Some(MatchingType::CC),
            _ => None,
        }
    }
}

impl fmt::Display for MatchingType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

pub fn matching_type(a: &NameString, b: &NameString) -> MatchingType {
    match (a.name_type, b.name_type) {
        (NameType::En, NameType::En) => MatchingType::EE,
        (NameType::Cn, NameType::Cn) => MatchingType::CC,
        _ => MatchingType::CE,
    }
}

/// Which of the two networks an account lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Network {
    First,
    Second,
}

impl Network {
    pub fn from_id(id: u8) -> Option<Self> {
        match id {
            1 => Some(Network::First),
            2 => Some(Network::Second),
            _ => None,
        }
    }

    pub fn id(self) -> u8 {
        match self {
            Network::First => 1,
            Network::Second => 2,
        }
    }
}

/// An account with a fixed number of name slots. `None` marks an absent
/// name padded in at ingest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Account {
    pub network: Network,
    pub account_id: String,
    pub names: Vec<Option<NameString>>,
}

impl Account {
    pub fn new(network: Network, account_id: &str, names: Vec<Option<NameString>>) -> Self {
        Account {
            network,
            account_id: account_id.to_string(),
            names,
        }
    }

    /// Builds an account from raw names, padding with absent slots up to
    /// `slots`. Empty strings count as absent.
    pub fn from_raw(
        network: Network,
        account_id: &str,
        raw_names: &[&str],
        slots: usize,
        classes: &CharClasses,
    ) -> Result<Self> {
        if raw_names.len() > slots {
            return Err(Error::SchemaViolation(format!(
                "account {account_id} has {} names, network {} allows {slots}",
                raw_names.len(),
                network.id()
            )));
        }
        let mut names = Vec::with_capacity(slots);
        for raw in raw_names {
            names.push(if raw.is_empty() {
                None
            } else {
                Some(classes.name(raw)?)
            });
        }
        names.resize(slots, None);
        Ok(Account::new(network, account_id, names))
    }

    pub fn check_slots(&self, slots: usize) -> Result<()> {
        if self.names.len() == slots {
            Ok(())
        } else {
            Err(Error::SchemaViolation(format!(
                "account {} has {} name slots, expected {slots}",
                self.account_id,
                self.names.len()
            )))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn classify_examples() {
        assert_eq!(classify_char('中'), CharClass::ChineseLetter);
        assert_eq!(classify_char('A'), CharClass::EnglishLetter);
        assert_eq!(classify_char('$'), CharClass::SpecialSymbol);
        assert_eq!(classify_char('_'), CharClass::WordSplitter);
        assert_eq!(classify_char(' '), CharClass::WordSplitter);
        assert_eq!(classify_char('-'), CharClass::SpecialSymbol);
        assert_eq!(classify_char('7'), CharClass::SpecialSymbol);
        // kana and fullwidth letters are not Chinese or English letters
        assert_eq!(classify_char('の'), CharClass::SpecialSymbol);
        assert_eq!(classify_char('Ａ'), CharClass::SpecialSymbol);
        assert_eq!(classify_char('\u{3400}'), CharClass::ChineseLetter);
    }

    #[test]
    fn name_typing() {
        assert_eq!(classify_name("JackWu123").unwrap().name_type(), NameType::En);
        assert_eq!(classify_name("李雷").unwrap().name_type(), NameType::Cn);
        assert_eq!(classify_name("Mr.李").unwrap().name_type(), NameType::Cn);
        assert_eq!(classify_name(""), Err(Error::EmptyName));
    }

    #[test]
    fn matching_types() {
        let n = |s| NameString::new(s).unwrap();
        assert_eq!(matching_type(&n("jack"), &n("jack1")), MatchingType::EE);
        assert_eq!(matching_type(&n("李雷"), &n("LiLei")), MatchingType::CE);
        assert_eq!(matching_type(&n("LiLei"), &n("李雷")), MatchingType::CE);
        assert_eq!(matching_type(&n("李雷"), &n("李磊")), MatchingType::CC);
    }

    #[test]
    fn normalizations() {
        assert_eq!(lowercase("JackWu"), "jackwu");
        assert_eq!(lowercase("李雷A"), "李雷a");
        assert_eq!(lowercase("1988"), "1988");
        assert_eq!(strip_splitters("Jack_Wu"), "JackWu");
        assert_eq!(strip_splitters("a b c"), "abc");
        assert_eq!(strip_splitters("李雷"), "李雷");
        assert_eq!(special_string("Jack1988"), "1988");
        assert_eq!(special_string("Show_Me_$$$"), "__$$$");
        assert_eq!(special_string("李雷"), "");
        assert_eq!(non_special_string("12Jack_Wu"), "JackWu");
        assert_eq!(non_special_string("李雷88"), "李雷");
        assert_eq!(non_special_string("###"), "");
        assert_eq!(english_letters("李雷lei_88"), "lei");
    }

    #[test]
    fn config_round_trip() {
        let classes = CharClasses::new(vec![(0x4E00, 0x9FFF)], vec![' ', '_', '-']).unwrap();
        let text = classes.to_config_string();
        assert_eq!(CharClasses::parse(&text).unwrap(), classes);
        assert_eq!(classes.classify('-'), CharClass::WordSplitter);
        assert_eq!(classes.classify('\u{3400}'), CharClass::SpecialSymbol);
    }

    #[test]
    fn config_rejects_garbage() {
        assert!(CharClasses::parse("chinese = 4E00-9FFF\n").is_err());
        assert!(CharClasses::parse("version = 1\nchinese = zz\n").is_err());
        assert!(CharClasses::parse("version = 1\nsplitters = 0041\n").is_err());
        assert!(CharClasses::parse("version = 1\ncolour = red\n").is_err());
        assert!(CharClasses::parse("version = 2\n").is_err());
    }

    #[test]
    fn default_config_matches_free_functions() {
        let classes = CharClasses::default();
        for c in ['a', 'Z', '中', '_', ' ', '#', '9', 'é', '\u{4DBF}', '\u{9FFF}', '\u{A000}'] {
            assert_eq!(classes.classify(c), classify_char(c));
        }
    }

    #[test]
    fn account_padding() {
        let classes = CharClasses::default();
        let acc = Account::from_raw(Network::Second, "t1", &["lilei"], 2, &classes).unwrap();
        assert_eq!(acc.names.len(), 2);
        assert!(acc.names[1].is_none());
        assert!(Account::from_raw(Network::First, "w1", &["a", "b"], 1, &classes).is_err());
        assert!(acc.check_slots(3).is_err());
    }
}
