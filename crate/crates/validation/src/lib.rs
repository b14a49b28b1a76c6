//! Bookkeeping for the acceptance suite: named criteria made of individual
//! checks, reported as one PASS/FAIL line each.

use std::fmt;

#[derive(Debug)]
pub struct Criterion {
    pub id: String,
    pub title: String,
    checks: usize,
    failures: Vec<String>,
}

impl Criterion {
    pub fn new(id: impl Into<String>, title: impl Into<String>) -> Self {
        Self { id: id.into(), title: title.into(), checks: 0, failures: Vec::new() }
    }

    /// Records one check and echoes it, indented, to stdout.
    pub fn check(&mut self, ok: bool, detail: impl fmt::Display) -> bool {
        self.checks += 1;
        let detail = detail.to_string();
        if ok {
            println!("      ok    {detail}");
        } else {
            println!("      MISS  {detail}");
            self.failures.push(detail);
        }
        ok
    }

    pub fn note(&self, detail: impl fmt::Display) {
        println!("      info  {detail}");
    }

    pub fn passed(&self) -> bool {
        self.checks > 0 && self.failures.is_empty()
    }

    pub fn checks(&self) -> usize {
        self.checks
    }

    pub fn failures(&self) -> &[String] {
        &self.failures
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        let ok = self.checks - self.failures.len();
        write!(f, "{verdict} [{}] {} ({ok}/{} checks)", self.id, self.title, self.checks)
    }
}

/// Ordered collection of finished criteria.
#[derive(Debug, Default)]
pub struct Suite {
    done: Vec<Criterion>,
}

impl Suite {
    pub fn new() -> Self {
        Self::default()
    }

    /// Runs `body` against a fresh criterion. Verdicts are printed by
    /// [`Suite::summary`].
    pub fn run(&mut self, id: &str, title: &str, body: impl FnOnce(&mut Criterion)) {
        println!("[{id}] {title}");
        let mut c = Criterion::new(id, title);
        body(&mut c);
        self.done.push(c);
    }

    pub fn criteria(&self) -> &[Criterion] {
        &self.done
    }

    pub fn all_passed(&self) -> bool {
        self.done.iter().all(Criterion::passed)
    }

    pub fn summary(&self) -> String {
        let mut s = String::from("\nacceptance summary\n");
        for c in &self.done {
            s.push_str(&format!("{c}\n"));
        }
        let passed = self.done.iter().filter(|c| c.passed()).count();
        s.push_str(&format!("{passed}/{} criteria passed\n", self.done.len()));
        s
    }
}
