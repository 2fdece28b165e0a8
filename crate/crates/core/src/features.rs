//! Fixed-length feature vectors for the three matching types.
//!
//! Layouts (every value lies in `[0, 1]`):
//!
//! EE, 18 values:
//!
//! | index | feature |
//! |-------|---------|
//! | 0, 1 | `sl` on raw and lowercased names |
//! | 2..=5 | `pls` on raw, splitter-stripped, lowercased, stripped + lowercased |
//! | 6, 7 | cosine and Jaccard of the special-symbol strings |
//! | 8, 9 | `sa` on raw and lowercased names |
//! | 10..=13 | cosine, Jaccard, `pls`, `sl` of the letter-only strings |
//! | 14..=17 | the same four after lowercasing |
//!
//! CE, 82 values: the EE block on the raw pair, then one 8-value block per
//! phonetic form of the Cn name in the order `Hy Ct Ty Wd Hy' Ct' Ty' Wd'`
//! (primed forms have the family name moved to the end). Each block holds
//! `sl`, `pls`, `pls` without splitters, `sa`, then cosine, Jaccard, `pls`
//! and `sl` of the English-letter strings.
//!
//! CC, 58 values: the EE block on the raw pair, then one 8-value block per
//! transform `Ts Hy Ct Ty Wd` laid out like the CE blocks but over the
//! Chinese + English letter strings.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::metrics::{cosine_chars, jaccard_chars, pls_chars, sa_chars, sl_chars};
use crate::text::{lowercase, CharClass, CharClasses, MatchingType, NameString};
use crate::translit::Transliterator;

pub const EE_LEN: usize = 18;
pub const CE_LEN: usize = 82;
pub const CC_LEN: usize = 58;

const EE_LABELS: [&str; EE_LEN] = [
    "sl",
    "sl_lower",
    "pls",
    "pls_stripped",
    "pls_lower",
    "pls_stripped_lower",
    "cos_special",
    "jac_special",
    "sa",
    "sa_lower",
    "cos_letters",
    "jac_letters",
    "pls_letters",
    "sl_letters",
    "cos_letters_lower",
    "jac_letters_lower",
    "pls_letters_lower",
    "sl_letters_lower",
];

const CE_FORMS: [&str; 8] = ["hy", "ct", "ty", "wd", "hy_famlast", "ct_famlast", "ty_famlast", "wd_famlast"];
const CE_BLOCK: [&str; 8] = ["sl", "pls", "pls_stripped", "sa", "cos_en", "jac_en", "pls_en", "sl_en"];

const CC_TRANSFORMS: [&str; 5] = ["ts", "hy", "ct", "ty", "wd"];
const CC_BLOCK: [&str; 8] = [
    "sl",
    "pls",
    "pls_stripped",
    "sa",
    "cos_letters",
    "jac_letters",
    "pls_letters",
    "sl_letters",
];

/// Index labels of one matching type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeatureSchema {
    matching_type: MatchingType,
    labels: Vec<String>,
}

impl FeatureSchema {
    pub fn new(matching_type: MatchingType) -> Self {
        let mut labels: Vec<String> = EE_LABELS.iter().map(|s| s.to_string()).collect();
        match matching_type {
            MatchingType::EE => {}
            MatchingType::CE => {
                for form in CE_FORMS {
                    labels.extend(CE_BLOCK.iter().map(|f| format!("{form}.{f}")));
                }
            }
            MatchingType::CC => {
                for t in CC_TRANSFORMS {
                    labels.extend(CC_BLOCK.iter().map(|f| format!("{t}.{f}")));
                }
            }
        }
        FeatureSchema {
            matching_type,
            labels,
        }
    }

    pub fn matching_type(&self) -> MatchingType {
        self.matching_type
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// One `index<TAB>label` line per feature.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (i, l) in self.labels.iter().enumerate() {
            out.push_str(&format!("{i}\t{l}\n"));
        }
        out
    }
}

/// Feature length of a matching type.
pub fn schema_len(mt: MatchingType) -> usize {
    match mt {
        MatchingType::EE => EE_LEN,
        MatchingType::CE => CE_LEN,
        MatchingType::CC => CC_LEN,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    pub matching_type: MatchingType,
    pub values: Vec<f64>,
}

impl FeatureVector {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Computes feature vectors with a shared set of transliteration tables.
#[derive(Debug, Clone)]
pub struct FeatureExtractor {
    translit: Transliterator,
}

impl Default for FeatureExtractor {
    fn default() -> Self {
        FeatureExtractor::new(Transliterator::bundled())
    }
}

impl FeatureExtractor {
    pub fn new(translit: Transliterator) -> Self {
        FeatureExtractor { translit }
    }

    pub fn transliterator(&self) -> &Transliterator {
        &self.translit
    }

    fn classes(&self) -> &CharClasses {
        self.translit.classes()
    }

    pub fn features_ee(&self, a: &NameString, b: &NameString) -> Result<FeatureVector> {
        if a.is_cn() || b.is_cn() {
            return Err(Error::TypeMismatch("EE features need two En names"));
        }
        Ok(FeatureVector {
            matching_type: MatchingType::EE,
            values: self.ee_values(a.as_str(), b.as_str()),
        })
    }

    pub fn features_ce(&self, cn: &NameString, en: &NameString) -> Result<FeatureVector> {
        if !cn.is_cn() || en.is_cn() {
            return Err(Error::TypeMismatch("CE features need a Cn name then an En name"));
        }
        Ok(FeatureVector {
            matching_type: MatchingType::CE,
            values: self.ce_values(cn.as_str(), en.as_str()),
        })
    }

    pub fn features_cc(&self, a: &NameString, b: &NameString) -> Result<FeatureVector> {
        if !a.is_cn() || !b.is_cn() {
            return Err(Error::TypeMismatch("CC features need two Cn names"));
        }
        Ok(FeatureVector {
            matching_type: MatchingType::CC,
            values: self.cc_values(a.as_str(), b.as_str()),
        })
    }

    /// Routes a pair to the extractor of its matching type. A CE pair may
    /// come in either order.
    pub fn extract(&self, a: &NameString, b: &NameString) -> FeatureVector {
        let (mt, values) = match (a.is_cn(), b.is_cn()) {
            (false, false) => (MatchingType::EE, self.ee_values(a.as_str(), b.as_str())),
            (true, false) => (MatchingType::CE, self.ce_values(a.as_str(), b.as_str())),
            (false, true) => (MatchingType::CE, self.ce_values(b.as_str(), a.as_str())),
            (true, true) => (MatchingType::CC, self.cc_values(a.as_str(), b.as_str())),
        };
        FeatureVector {
            matching_type: mt,
            values,
        }
    }

    /// Features of a given layout for a pair of any types, used by the flat
    /// baselines. EE works on the raw strings. CE transliterates whichever
    /// name is Cn (the first when both are) and compares against the other;
    /// with no Cn name every form is the lowercased first name. CC applies
    /// the transforms to both names, which leaves En names lowercased.
    pub fn extract_as(&self, mt: MatchingType, a: &str, b: &str) -> Vec<f64> {
        match mt {
            MatchingType::EE => self.ee_values(a, b),
            MatchingType::CE => {
                let b_cn = b.chars().any(|c| self.classes().is_chinese(c));
                let a_cn = a.chars().any(|c| self.classes().is_chinese(c));
                if b_cn && !a_cn {
                    self.ce_values(b, a)
                } else {
                    self.ce_values(a, b)
                }
            }
            MatchingType::CC => self.cc_values(a, b),
        }
    }

    pub(crate) fn ee_values(&self, a: &str, b: &str) -> Vec<f64> {
        let mut out = Vec::with_capacity(CE_LEN);
        self.push_ee(&mut out, a, b);
        out
    }

    fn ce_values(&self, cn: &str, en: &str) -> Vec<f64> {
        let mut out = Vec::with_capacity(CE_LEN);
        self.push_ee(&mut out, cn, en);
        let forms = self.translit.phonetic_forms_unchecked(cn);
        let en: Vec<char> = lowercase(en).chars().collect();
        for form in &forms {
            let form: Vec<char> = lowercase(form).chars().collect();
            self.push_block(&mut out, &form, &en, |c| c.is_ascii_alphabetic());
        }
        out
    }

    fn cc_values(&self, a: &str, b: &str) -> Vec<f64> {
        let mut out = Vec::with_capacity(CC_LEN);
        self.push_ee(&mut out, a, b);
        let ta = self.translit.transforms_cc_unchecked(a);
        let tb = self.translit.transforms_cc_unchecked(b);
        let classes = self.classes();
        for (x, y) in ta.iter().zip(&tb) {
            let x: Vec<char> = x.chars().collect();
            let y: Vec<char> = y.chars().collect();
            self.push_block(&mut out, &x, &y, |c| {
                matches!(
                    classes.classify(c),
                    CharClass::ChineseLetter | CharClass::EnglishLetter
                )
            });
        }
        out
    }

    fn push_ee(&self, out: &mut Vec<f64>, a: &str, b: &str) {
        let classes = self.classes();
        let a: Vec<char> = a.chars().collect();
        let b: Vec<char> = b.chars().collect();
        let lower = |s: &[char]| -> Vec<char> { s.iter().map(|c| c.to_ascii_lowercase()).collect() };
        let keep = |s: &[char], f: &dyn Fn(CharClass) -> bool| -> Vec<char> {
            s.iter().copied().filter(|&c| f(classes.classify(c))).collect()
        };
        let not_splitter = |k: CharClass| k != CharClass::WordSplitter;
        let special = |k: CharClass| matches!(k, CharClass::SpecialSymbol | CharClass::WordSplitter);
        let letter = |k: CharClass| matches!(k, CharClass::ChineseLetter | CharClass::EnglishLetter);

        let (la, lb) = (lower(&a), lower(&b));
        let (sa_, sb_) = (keep(&a, &not_splitter), keep(&b, &not_splitter));
        let (sla, slb) = (lower(&sa_), lower(&sb_));
        let (pa, pb) = (keep(&a, &special), keep(&b, &special));
        let (na, nb) = (keep(&a, &letter), keep(&b, &letter));
        let (nla, nlb) = (lower(&na), lower(&nb));

        out.push(sl_chars(&a, &b));
        out.push(sl_chars(&la, &lb));
        out.push(pls_chars(&a, &b));
        out.push(pls_chars(&sa_, &sb_));
        out.push(pls_chars(&la, &lb));
        out.push(pls_chars(&sla, &slb));
        out.push(cosine_chars(&pa, &pb));
        out.push(jaccard_chars(&pa, &pb));
        out.push(sa_chars(&a, &b));
        out.push(sa_chars(&la, &lb));
        for (x, y) in [(&na, &nb), (&nla, &nlb)] {
            out.push(cosine_chars(x, y));
            out.push(jaccard_chars(x, y));
            out.push(pls_chars(x, y));
            out.push(sl_chars(x, y));
        }
    }

    /// One 8-value block over already-lowercased strings; `keep` selects the
    /// letters of the last four features.
    fn push_block(&self, out: &mut Vec<f64>, x: &[char], y: &[char], keep: impl Fn(char) -> bool) {
        let classes = self.classes();
        let strip = |s: &[char]| -> Vec<char> {
            s.iter()
                .copied()
                .filter(|&c| classes.classify(c) != CharClass::WordSplitter)
                .collect()
        };
        let kx: Vec<char> = x.iter().copied().filter(|&c| keep(c)).collect();
        let ky: Vec<char> = y.iter().copied().filter(|&c| keep(c)).collect();
        out.push(sl_chars(x, y));
        out.push(pls_chars(x, y));
        out.push(pls_chars(&strip(x), &strip(y)));
        out.push(sa_chars(x, y));
        out.push(cosine_chars(&kx, &ky));
        out.push(jaccard_chars(&kx, &ky));
        out.push(pls_chars(&kx, &ky));
        out.push(sl_chars(&kx, &ky));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics;

    fn name(s: &str) -> NameString {
        NameString::new(s).unwrap()
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn schema_lengths_and_unique_labels() {
        for (mt, len) in [(MatchingType::EE, 18), (MatchingType::CE, 82), (MatchingType::CC, 58)] {
            let s = FeatureSchema::new(mt);
            assert_eq!(s.len(), len);
            assert_eq!(schema_len(mt), len);
            let mut l = s.labels().to_vec();
            l.sort();
            l.dedup();
            assert_eq!(l.len(), len);
        }
    }

    #[test]
    fn ee_identity_and_case() {
        let fx = FeatureExtractor::default();
        let v = fx.features_ee(&name("jack88"), &name("jack88")).unwrap();
        assert!(v.values.iter().all(|&x| x == 1.0));
        let v = fx.features_ee(&name("JackWu"), &name("jackwu")).unwrap();
        assert!(close(v.values[0], 1.0 - 2.0 / 6.0));
        assert_eq!(v.values[1], 1.0);
        // no special symbols on either side
        assert_eq!(v.values[6], 1.0);
        assert_eq!(v.values[7], 1.0);
        assert!(fx.features_ee(&name("李雷"), &name("lilei")).is_err());
    }

    #[test]
    fn ce_examples() {
        let fx = FeatureExtractor::default();
        let v = fx.features_ce(&name("李雷"), &name("lilei")).unwrap();
        assert_eq!(v.len(), 82);
        assert_eq!(v.values[18], 1.0);
        assert_eq!(v.values[19], 1.0);
        let v = fx.features_ce(&name("李雷"), &name("zzz999")).unwrap();
        for k in 0..8 {
            let block = &v.values[18 + 8 * k..26 + 8 * k];
            assert_eq!(block, &[0.0; 8]);
        }
        assert!(fx.features_ce(&name("lilei"), &name("李雷")).is_err());
    }

    #[test]
    fn ce_blocks_match_direct_metric_calls() {
        let fx = FeatureExtractor::default();
        let cn = name("单丹");
        let en = name("Dan_Shan88");
        let v = fx.features_ce(&cn, &en).unwrap();
        let forms = fx.transliterator().phonetic_forms_ce(&cn).unwrap();
        let e = lowercase(en.as_str());
        for (k, f) in forms.iter().enumerate() {
            let b = &v.values[18 + 8 * k..26 + 8 * k];
            let f = lowercase(f);
            assert_eq!(b[0], metrics::sl(&f, &e));
            assert_eq!(b[1], metrics::pls(&f, &e));
            assert_eq!(b[2], metrics::pls(&f.replace('_', ""), &e.replace('_', "")));
            assert_eq!(b[3], metrics::sa(&f, &e));
            let (ef, ee) = (crate::text::english_letters(&f), crate::text::english_letters(&e));
            assert_eq!(b[4], metrics::cosine_char(&ef, &ee));
            assert_eq!(b[5], metrics::jaccard_char(&ef, &ee));
            assert_eq!(b[6], metrics::pls(&ef, &ee));
            assert_eq!(b[7], metrics::sl(&ef, &ee));
        }
    }

    #[test]
    fn cc_examples() {
        let fx = FeatureExtractor::default();
        let v = fx.features_cc(&name("龍"), &name("龙")).unwrap();
        assert_eq!(v.len(), 58);
        assert_eq!(v.values[18], 1.0);
        let v = fx.features_cc(&name("李雷"), &name("李雷")).unwrap();
        assert!(v.values.iter().all(|&x| x == 1.0));
        // 丽 and 莉 share the Hanyu syllable li
        let v = fx.features_cc(&name("王丽"), &name("王莉")).unwrap();
        assert_eq!(v.values[26], 1.0);
    }

    #[test]
    fn extract_dispatches_both_ce_orders() {
        let fx = FeatureExtractor::default();
        let a = fx.extract(&name("李雷"), &name("lilei"));
        let b = fx.extract(&name("lilei"), &name("李雷"));
        assert_eq!(a, b);
        assert_eq!(a.matching_type, MatchingType::CE);
    }

    #[test]
    fn extract_as_any_types() {
        let fx = FeatureExtractor::default();
        assert_eq!(fx.extract_as(MatchingType::CE, "jack", "jack").len(), 82);
        assert_eq!(fx.extract_as(MatchingType::CC, "jack", "李雷").len(), 58);
        assert_eq!(fx.extract_as(MatchingType::EE, "李雷", "李雷").len(), 18);
        assert!(fx.extract_as(MatchingType::CE, "JACK", "jack")[18..].iter().all(|&x| x == 1.0));
    }
}
