use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

/// Direction of a name lookup.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    ToSerialized,
    ToStandard,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TranslationEntry {
    /// Class (standard name) whose elements use the mapping; `None` is the
    /// global scope.
    pub scope: Option<String>,
    pub standard: String,
    pub serialized: String,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TranslationError {
    #[error("line {line}: expected `scope standard serialized`, got `{text}`")]
    Syntax { line: usize, text: String },
    #[error("`{name}` is mapped twice in scope `{scope}`")]
    NotBijective { scope: String, name: String },
}

/// Bidirectional standard-name ⇄ serialized-name map.
///
/// Names without an entry translate to themselves.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TranslationTable {
    entries: Vec<TranslationEntry>,
}

impl TranslationTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Naming conflicts known between the standard's class names and the
    /// element names tools write.
    pub fn bpmn_default() -> Self {
        let mut table = TranslationTable::new();
        table
            .insert(None, "ExtensionDefinition", "extensionElements")
            .expect("static table is bijective");
        table
            .insert(Some("Lane"), "LaneSet", "childLaneSet")
            .expect("static table is bijective");
        table
    }

    pub fn entries(&self) -> &[TranslationEntry] {
        &self.entries
    }

    pub fn insert(&mut self, scope: Option<&str>, standard: &str, serialized: &str) -> Result<(), TranslationError> {
        let scope = scope.map(ToString::to_string);
        for entry in self.entries.iter().filter(|e| e.scope == scope) {
            let clash = if entry.standard == standard {
                Some(standard)
            } else if entry.serialized == serialized {
                Some(serialized)
            } else {
                None
            };
            if let Some(name) = clash {
                return Err(TranslationError::NotBijective {
                    scope: scope.unwrap_or_else(|| "*".to_string()),
                    name: name.to_string(),
                });
            }
        }
        self.entries.push(TranslationEntry {
            scope,
            standard: standard.to_string(),
            serialized: serialized.to_string(),
        });
        Ok(())
    }

    fn lookup(&self, scope: Option<&str>, name: &str, direction: Direction) -> Option<&str> {
        self.entries
            .iter()
            .filter(|e| e.scope.as_deref() == scope)
            .find_map(|e| match direction {
                Direction::ToSerialized if e.standard == name => Some(e.serialized.as_str()),
                Direction::ToStandard if e.serialized == name => Some(e.standard.as_str()),
                _ => None,
            })
    }

    /// Global-scope translation; unmapped names come back unchanged.
    pub fn translate(&self, name: &str, direction: Direction) -> String {
        self.lookup(None, name, direction).unwrap_or(name).to_string()
    }

    /// Translation for an element whose context is described by `scopes`,
    /// most specific first. The first scope with an entry wins, then the
    /// global scope.
    pub fn translate_in<'a>(
        &self,
        scopes: impl IntoIterator<Item = &'a str>,
        name: &str,
        direction: Direction,
    ) -> String {
        scopes
            .into_iter()
            .find_map(|scope| self.lookup(Some(scope), name, direction))
            .or_else(|| self.lookup(None, name, direction))
            .unwrap_or(name)
            .to_string()
    }

    /// Parse the three-column text format: `scope standard serialized`,
    /// whitespace separated, `*` for the global scope, `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, TranslationError> {
        let mut table = TranslationTable::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let cols: Vec<&str> = line.split_whitespace().collect();
            let [scope, standard, serialized] = cols[..] else {
                return Err(TranslationError::Syntax {
                    line: n + 1,
                    text: raw.to_string(),
                });
            };
            let scope = (scope != "*").then_some(scope);
            table.insert(scope, standard, serialized)?;
        }
        Ok(table)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::from("# scope\tstandard\tserialized\n");
        for e in &self.entries {
            out.push_str(&format!(
                "{}\t{}\t{}\n",
                e.scope.as_deref().unwrap_or("*"),
                e.standard,
                e.serialized
            ));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extension_definition_maps_to_extension_elements() {
        let t = TranslationTable::bpmn_default();
        assert_eq!(t.translate("ExtensionDefinition", Direction::ToSerialized), "extensionElements");
        assert_eq!(t.translate("extensionElements", Direction::ToStandard), "ExtensionDefinition");
    }

    #[test]
    fn unmapped_names_pass_through() {
        let t = TranslationTable::bpmn_default();
        assert_eq!(t.translate("task", Direction::ToStandard), "task");
        assert_eq!(t.translate("task", Direction::ToSerialized), "task");
    }

    #[test]
    fn every_entry_round_trips() {
        let t = TranslationTable::bpmn_default();
        for e in t.entries() {
            let scopes: Vec<&str> = e.scope.iter().map(String::as_str).collect();
            let ser = t.translate_in(scopes.iter().copied(), &e.standard, Direction::ToSerialized);
            assert_eq!(ser, e.serialized);
            assert_eq!(t.translate_in(scopes.iter().copied(), &ser, Direction::ToStandard), e.standard);
        }
    }

    #[test]
    fn scoped_entries_only_apply_in_scope() {
        let t = TranslationTable::bpmn_default();
        assert_eq!(t.translate("childLaneSet", Direction::ToStandard), "childLaneSet");
        assert_eq!(t.translate_in(["Lane"], "childLaneSet", Direction::ToStandard), "LaneSet");
    }

    #[test]
    fn text_format_round_trips_and_rejects_clashes() {
        let t = TranslationTable::bpmn_default();
        assert_eq!(TranslationTable::parse(&t.to_text()).unwrap(), t);
        assert!(matches!(
            TranslationTable::parse("* A a\n* B a\n"),
            Err(TranslationError::NotBijective { .. })
        ));
        assert!(matches!(
            TranslationTable::parse("* onlytwo\n"),
            Err(TranslationError::Syntax { line: 1, .. })
        ));
        let scoped = TranslationTable::parse("* A a\nX B a # same serialized name, other scope\n").unwrap();
        assert_eq!(scoped.entries().len(), 2);
    }
}
