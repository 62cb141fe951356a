//! Tokenization, vocabularies and encoded corpora.
//!
//! Corpus files are UTF-8 text with one sentence per line; a blank line
//! separates documents. Vocabulary files hold one `word<TAB>count` per line
//! and the 0-based line number is the word id.

use std::collections::HashMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};

/// Lowercases, splits on whitespace and strips leading/trailing characters
/// outside `[a-z0-9]`. Tokens that end up empty are dropped.
pub fn tokenize(text: &str) -> Vec<String> {
    text.split_whitespace()
        .filter_map(|raw| {
            let lower = raw.to_lowercase();
            let trimmed =
                lower.trim_matches(|c: char| !(c.is_ascii_lowercase() || c.is_ascii_digit()));
            if trimmed.is_empty() {
                None
            } else {
                Some(trimmed.to_string())
            }
        })
        .collect()
}

/// Tokenized text before vocabulary filtering: documents of sentences of
/// token strings.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RawCorpus {
    pub documents: Vec<Vec<Vec<String>>>,
}

impl RawCorpus {
    /// Parses the corpus text format. Lines that tokenize to nothing are
    /// skipped; runs of blank lines count as a single document break.
    pub fn parse(text: &str) -> Self {
        let mut documents = Vec::new();
        let mut current: Vec<Vec<String>> = Vec::new();
        for line in text.lines() {
            if line.trim().is_empty() {
                if !current.is_empty() {
                    documents.push(std::mem::take(&mut current));
                }
                continue;
            }
            let tokens = tokenize(line);
            if !tokens.is_empty() {
                current.push(tokens);
            }
        }
        if !current.is_empty() {
            documents.push(current);
        }
        RawCorpus { documents }
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(Self::parse(&text))
    }

    /// A single document holding the given sentences.
    pub fn from_sentences(sentences: Vec<Vec<String>>) -> Self {
        RawCorpus {
            documents: vec![sentences],
        }
    }

    pub fn sentences(&self) -> impl Iterator<Item = &Vec<String>> {
        self.documents.iter().flatten()
    }

    pub fn is_empty(&self) -> bool {
        self.sentences().all(|s| s.is_empty())
    }
}

/// Bidirectional word/id map with occurrence counts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vocabulary {
    words: Vec<String>,
    ids: HashMap<String, usize>,
    counts: Vec<u64>,
}

impl Vocabulary {
    /// Builds a vocabulary from `(word, count)` pairs in id order.
    pub fn from_counts(entries: Vec<(String, u64)>) -> Result<Self> {
        let mut words = Vec::with_capacity(entries.len());
        let mut counts = Vec::with_capacity(entries.len());
        let mut ids = HashMap::with_capacity(entries.len());
        for (word, count) in entries {
            if ids.insert(word.clone(), words.len()).is_some() {
                return Err(Error::InvalidArgument(format!("duplicate word {word:?}")));
            }
            words.push(word);
            counts.push(count);
        }
        Ok(Vocabulary { words, ids, counts })
    }

    /// Builds a vocabulary from words in id order, with unit counts.
    pub fn from_words<I, S>(words: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self::from_counts(words.into_iter().map(|w| (w.into(), 1)).collect())
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn id(&self, word: &str) -> Option<usize> {
        self.ids.get(word).copied()
    }

    pub fn word(&self, id: usize) -> &str {
        &self.words[id]
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn count(&self, id: usize) -> u64 {
        self.counts[id]
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn contains(&self, word: &str) -> bool {
        self.ids.contains_key(word)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let mut out = String::new();
        for (w, c) in self.words.iter().zip(&self.counts) {
            out.push_str(w);
            out.push('\t');
            out.push_str(&c.to_string());
            out.push('\n');
        }
        fs::write(path, out).map_err(|e| Error::io(path, e))
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut entries = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let (word, count) = line
                .split_once('\t')
                .ok_or_else(|| Error::parse(path, lineno + 1, "expected word<TAB>count"))?;
            let count = count
                .trim()
                .parse::<u64>()
                .map_err(|e| Error::parse(path, lineno + 1, e.to_string()))?;
            entries.push((word.to_string(), count));
        }
        Self::from_counts(entries).map_err(|e| Error::parse(path, 0, e.to_string()))
    }
}

/// Orders `(word, count)` pairs by descending count, then lexicographically.
fn sort_by_frequency(entries: &mut [(String, u64)]) {
    entries.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
}

/// Counts every token and keeps words seen at least `min_count` times.
pub fn build_vocab(raw: &RawCorpus, min_count: u64) -> Result<Vocabulary> {
    if min_count == 0 {
        return Err(Error::InvalidArgument("min_count must be positive".into()));
    }
    if raw.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let mut freq: HashMap<&str, u64> = HashMap::new();
    for token in raw.sentences().flatten() {
        *freq.entry(token.as_str()).or_default() += 1;
    }
    let mut entries: Vec<(String, u64)> = freq
        .into_iter()
        .filter(|&(_, c)| c >= min_count)
        .map(|(w, c)| (w.to_string(), c))
        .collect();
    if entries.is_empty() {
        return Err(Error::EmptyVocabulary { min_count });
    }
    sort_by_frequency(&mut entries);
    Vocabulary::from_counts(entries)
}

/// Words present in every input vocabulary, counted by their minimum count.
pub fn intersect_vocabs(vocabs: &[&Vocabulary]) -> Result<Vocabulary> {
    let (first, rest) = vocabs
        .split_first()
        .ok_or_else(|| Error::InvalidArgument("no vocabularies to intersect".into()))?;
    let mut entries: Vec<(String, u64)> = first
        .words
        .iter()
        .zip(&first.counts)
        .filter_map(|(w, &c)| {
            let mut min = c;
            for v in rest {
                min = min.min(v.count(v.id(w)?));
            }
            Some((w.clone(), min))
        })
        .collect();
    if entries.is_empty() {
        return Err(Error::EmptyIntersection);
    }
    sort_by_frequency(&mut entries);
    Vocabulary::from_counts(entries)
}

pub type Sentence = Vec<u32>;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Document {
    pub sentences: Vec<Sentence>,
}

impl Document {
    pub fn tokens(&self) -> impl Iterator<Item = u32> + '_ {
        self.sentences.iter().flatten().copied()
    }

    pub fn len(&self) -> usize {
        self.sentences.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// A corpus encoded against a vocabulary. Every token id is below the
/// vocabulary size and no sentence is empty.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Corpus {
    pub documents: Vec<Document>,
}

impl Corpus {
    pub fn sentences(&self) -> impl Iterator<Item = &Sentence> {
        self.documents.iter().flat_map(|d| d.sentences.iter())
    }

    pub fn num_tokens(&self) -> usize {
        self.documents.iter().map(Document::len).sum()
    }

    pub fn num_sentences(&self) -> usize {
        self.documents.iter().map(|d| d.sentences.len()).sum()
    }

    /// Maps ids back to strings; the inverse of [`encode`] on retained tokens.
    pub fn decode(&self, vocab: &Vocabulary) -> RawCorpus {
        RawCorpus {
            documents: self
                .documents
                .iter()
                .map(|d| {
                    d.sentences
                        .iter()
                        .map(|s| s.iter().map(|&id| vocab.word(id as usize).to_string()).collect())
                        .collect()
                })
                .collect(),
        }
    }
}

pub fn encode_sentence<S: AsRef<str>>(tokens: &[S], vocab: &Vocabulary) -> Sentence {
    tokens
        .iter()
        .filter_map(|t| vocab.id(t.as_ref()).map(|id| id as u32))
        .collect()
}

/// Drops out-of-vocabulary tokens and the sentences they leave empty.
/// Documents are kept in order, even when all their sentences vanish.
pub fn encode(raw: &RawCorpus, vocab: &Vocabulary) -> Corpus {
    Corpus {
        documents: raw
            .documents
            .iter()
            .map(|doc| Document {
                sentences: doc
                    .iter()
                    .map(|s| encode_sentence(s, vocab))
                    .filter(|s| !s.is_empty())
                    .collect(),
            })
            .collect(),
    }
}

/// Writes sentences one per line as space-separated words (the corpus file
/// format with a single document).
pub fn write_sentences<'a, I>(path: impl AsRef<Path>, sentences: I, vocab: &Vocabulary) -> Result<()>
where
    I: IntoIterator<Item = &'a Sentence>,
{
    let path = path.as_ref();
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = std::io::BufWriter::new(file);
    for sentence in sentences {
        let line: Vec<&str> = sentence.iter().map(|&id| vocab.word(id as usize)).collect();
        writeln!(out, "{}", line.join(" ")).map_err(|e| Error::io(path, e))?;
    }
    out.flush().map_err(|e| Error::io(path, e))
}
