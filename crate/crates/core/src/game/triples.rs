//! Diagonal enumeration of `N × N × N`: by coordinate sum, then lexicographically.

use super::Name;

#[derive(Debug, Clone, Default)]
pub struct Triples {
    sum: Name,
    f: Name,
    g: Name,
}

impl Iterator for Triples {
    type Item = (Name, Name, Name);

    fn next(&mut self) -> Option<Self::Item> {
        let out = (self.f, self.g, self.sum - self.f - self.g);
        self.g += 1;
        if self.f + self.g > self.sum {
            self.f += 1;
            self.g = 0;
            if self.f > self.sum {
                self.sum += 1;
                self.f = 0;
            }
        }
        Some(out)
    }
}

pub fn triples() -> Triples {
    Triples::default()
}
