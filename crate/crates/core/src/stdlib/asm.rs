//! Text assembler used by the generators. Emits DSL source with aligned
//! labels so the checked-in files stay readable.

pub(crate) struct Asm {
    header: Vec<String>,
    lines: Vec<(Option<String>, String)>,
    pending: Option<String>,
}

impl Asm {
    pub fn new(name: &str, arity: &str) -> Self {
        Asm { header: vec![format!("PROGRAM {name}"), format!("ARITY {arity}")], lines: Vec::new(), pending: None }
    }

    pub fn header(&mut self, line: impl Into<String>) {
        self.header.push(line.into());
    }

    /// Comment line; stays attached before the next instruction.
    pub fn note(&mut self, text: &str) {
        self.lines.push((None, format!("# {text}")));
    }

    /// Attaches `label` to the next instruction.
    pub fn label(&mut self, label: &str) {
        assert!(self.pending.is_none(), "two labels on one instruction");
        self.pending = Some(label.to_string());
    }

    pub fn op(&mut self, text: impl Into<String>) {
        self.lines.push((self.pending.take(), text.into()));
    }

    pub fn finish(self) -> String {
        assert!(self.pending.is_none(), "dangling label");
        let width = self.lines.iter().filter_map(|(l, _)| l.as_ref()).map(|l| (l.len() + 2).max(4)).max().unwrap_or(0);
        let mut out = self.header.join("\n");
        out.push('\n');
        for (label, text) in self.lines {
            let line = match label {
                Some(l) => format!("{:<width$}{text}", format!("{l}:")),
                None if text.starts_with('#') => text,
                None => format!("{:<width$}{text}", ""),
            };
            out.push_str(line.trim_end());
            out.push('\n');
        }
        out
    }
}
