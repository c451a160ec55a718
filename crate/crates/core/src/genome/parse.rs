use super::{Chromosome, CopyIndex, GeneOccurrence, Genome, GenomeError, Orientation, Shape};

/// Parse the bracket notation: `[ ... ]` for linear and `( ... )` for circular
/// chromosomes, genes as signed integers with an optional `.a`/`.b` suffix.
/// Text after `#` is ignored up to the end of the line.
pub fn parse_genome(text: &str) -> Result<Genome, GenomeError> {
    let mut chromosomes = Vec::new();
    for (line_idx, line) in text.lines().enumerate() {
        let line_no = line_idx + 1;
        let content = line.split('#').next().unwrap_or("");
        let mut p = LineParser {
            chars: content.char_indices().collect(),
            pos: 0,
            line: line_no,
        };
        while let Some(c) = p.skip_ws() {
            let (shape, close) = match c {
                '[' => (Shape::Linear, ']'),
                '(' => (Shape::Circular, ')'),
                other => return Err(p.error(format!("expected `[` or `(`, found `{other}`"))),
            };
            p.pos += 1;
            let genes = p.genes(close)?;
            let chromosome = Chromosome::new(shape, genes)
                .ok_or(GenomeError::EmptyChromosome { line: line_no })?;
            chromosomes.push(chromosome);
        }
    }
    Genome::new(chromosomes)
}

struct LineParser {
    chars: Vec<(usize, char)>,
    pos: usize,
    line: usize,
}

impl LineParser {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn skip_ws(&mut self) -> Option<char> {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.pos += 1;
        }
        self.peek()
    }

    fn error(&self, message: String) -> GenomeError {
        let column = match self.chars.get(self.pos) {
            Some(_) => self.pos + 1,
            None => self.chars.len() + 1,
        };
        GenomeError::Syntax {
            line: self.line,
            column,
            message,
        }
    }

    fn genes(&mut self, close: char) -> Result<Vec<GeneOccurrence>, GenomeError> {
        let mut genes = Vec::new();
        loop {
            match self.skip_ws() {
                None => return Err(self.error(format!("missing `{close}`"))),
                Some(c) if c == close => {
                    self.pos += 1;
                    return Ok(genes);
                }
                Some(_) => genes.push(self.gene()?),
            }
        }
    }

    fn gene(&mut self) -> Result<GeneOccurrence, GenomeError> {
        let start = self.pos;
        let orientation = if self.peek() == Some('-') {
            self.pos += 1;
            Orientation::Reverse
        } else {
            Orientation::Forward
        };
        let digits_start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == digits_start {
            self.pos = start;
            return Err(self.error("expected a gene identifier".into()));
        }
        let digits: String = self.chars[digits_start..self.pos]
            .iter()
            .map(|&(_, c)| c)
            .collect();
        let id: u32 = match digits.parse() {
            Ok(v) if v > 0 => v,
            _ => {
                self.pos = digits_start;
                return Err(self.error(format!(
                    "gene identifier `{digits}` must be a positive integer"
                )));
            }
        };
        let copy = if self.peek() == Some('.') {
            self.pos += 1;
            let copy = match self.peek() {
                Some('a') => CopyIndex::A,
                Some('b') => CopyIndex::B,
                _ => return Err(self.error("expected copy index `a` or `b`".into())),
            };
            self.pos += 1;
            copy
        } else {
            CopyIndex::None
        };
        match self.peek() {
            Some(c) if !(c.is_whitespace() || c == ']' || c == ')') => {
                Err(self.error(format!("unexpected `{c}` after gene")))
            }
            _ => Ok(GeneOccurrence::new(id, orientation, copy)),
        }
    }
}

/// One canonical chromosome per line, in genome order.
pub fn format_genome(g: &Genome) -> String {
    let mut out = String::new();
    for c in g.chromosomes() {
        out.push_str(&c.to_string());
        out.push('\n');
    }
    out
}
