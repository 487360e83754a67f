//! JSON output that is indented only down to a fixed nesting depth, so large
//! arrays of small records stay one record per line.

use std::io;

use serde::Serialize;
use serde_json::ser::Formatter;

struct ShallowPretty {
    max_depth: usize,
    /// One entry per open container: whether it has received a value yet.
    open: Vec<bool>,
}

impl ShallowPretty {
    fn indented(&self) -> bool {
        self.open.len() <= self.max_depth
    }

    fn newline<W: ?Sized + io::Write>(&self, w: &mut W, depth: usize) -> io::Result<()> {
        w.write_all(b"\n")?;
        for _ in 0..depth {
            w.write_all(b"  ")?;
        }
        Ok(())
    }

    fn begin<W: ?Sized + io::Write>(&mut self, w: &mut W, open: &[u8]) -> io::Result<()> {
        self.open.push(false);
        w.write_all(open)
    }

    fn end<W: ?Sized + io::Write>(&mut self, w: &mut W, close: &[u8]) -> io::Result<()> {
        let indented = self.indented();
        let had_values = self.open.pop().unwrap_or(false);
        if indented && had_values {
            self.newline(w, self.open.len())?;
        }
        w.write_all(close)
    }

    fn item<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        if let Some(top) = self.open.last_mut() {
            *top = true;
        }
        if !first {
            w.write_all(b",")?;
        }
        if self.indented() {
            self.newline(w, self.open.len())
        } else if !first {
            w.write_all(b" ")
        } else {
            Ok(())
        }
    }
}

impl Formatter for ShallowPretty {
    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.begin(w, b"[")
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.end(w, b"]")
    }

    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.item(w, first)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.begin(w, b"{")
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.end(w, b"}")
    }

    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.item(w, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        w.write_all(b": ")
    }
}

/// Serializes `value`, putting every container element at depth `max_depth`
/// or shallower on its own line. Ends with a newline.
pub(crate) fn to_string(value: &impl Serialize, max_depth: usize) -> serde_json::Result<String> {
    let mut out = Vec::new();
    let formatter = ShallowPretty {
        max_depth,
        open: Vec::new(),
    };
    let mut ser = serde_json::Serializer::with_formatter(&mut out, formatter);
    value.serialize(&mut ser)?;
    out.push(b'\n');
    Ok(String::from_utf8(out).expect("serde_json emits UTF-8"))
}

#[cfg(test)]
mod tests {
    use serde_json::json;

    #[test]
    fn indents_only_the_top_levels() {
        let v = json!({"a": 1, "list": [["x1", true], ["e", false]], "empty": []});
        let text = super::to_string(&v, 2).unwrap();
        assert_eq!(
            text,
            "{\n  \"a\": 1,\n  \"empty\": [],\n  \"list\": [\n    [\"x1\", true],\n    [\"e\", false]\n  ]\n}\n"
        );
        let back: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(back, v);
    }
}
