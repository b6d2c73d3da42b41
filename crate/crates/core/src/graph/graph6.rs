//! graph6 encoding: size prefix, then the upper triangle in column order
//! (x(0,1), x(0,2), x(1,2), x(0,3), ...), six bits per byte offset by 63.

use super::{Graph, GraphError};

const HEADER: &[u8] = b">>graph6<<";

pub fn encode(g: &Graph) -> Vec<u8> {
    let n = g.order();
    let mut out = encode_size(n);
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | g.has_edge(i, j) as u8;
            filled += 1;
            if filled == 6 {
                out.push(acc + 63);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((acc << (6 - filled)) + 63);
    }
    out
}

pub fn encode_string(g: &Graph) -> String {
    String::from_utf8(encode(g)).expect("graph6 is printable ASCII")
}

fn encode_size(n: usize) -> Vec<u8> {
    let groups = |count: usize| (0..count).rev().map(move |k| ((n >> (6 * k)) & 63) as u8 + 63);
    if n <= 62 {
        vec![n as u8 + 63]
    } else if n <= 258_047 {
        std::iter::once(126).chain(groups(3)).collect()
    } else {
        assert!(n < 1 << 36, "graph too large for graph6");
        [126, 126].into_iter().chain(groups(6)).collect()
    }
}

pub fn decode(data: &[u8]) -> Result<Graph, GraphError> {
    let mut data = data;
    if data.starts_with(HEADER) {
        data = &data[HEADER.len()..];
    }
    while let Some((&last, rest)) = data.split_last() {
        if last == b'\n' || last == b'\r' {
            data = rest;
        } else {
            break;
        }
    }
    let bad = |msg: &str| GraphError::Graph6(msg.to_string());
    if let Some(&b) = data.iter().find(|&&b| !(63..=126).contains(&b)) {
        return Err(GraphError::Graph6(format!("byte {b} outside 63..=126")));
    }
    let read_groups = |bytes: &[u8]| bytes.iter().fold(0usize, |acc, &b| (acc << 6) | (b - 63) as usize);
    let (n, body) = match data {
        [] => return Err(bad("empty input")),
        [126, 126, rest @ ..] => {
            if rest.len() < 6 {
                return Err(bad("truncated size"));
            }
            (read_groups(&rest[..6]), &rest[6..])
        }
        [126, rest @ ..] => {
            if rest.len() < 3 {
                return Err(bad("truncated size"));
            }
            (read_groups(&rest[..3]), &rest[3..])
        }
        [b, rest @ ..] => ((b - 63) as usize, rest),
    };
    let bit_count = n * n.saturating_sub(1) / 2;
    if body.len() != bit_count.div_ceil(6) {
        return Err(GraphError::Graph6(format!(
            "expected {} data bytes for n={n}, found {}",
            bit_count.div_ceil(6),
            body.len()
        )));
    }
    let mut g = Graph::empty(n);
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            let byte = body[k / 6] - 63;
            if byte >> (5 - k % 6) & 1 == 1 {
                g.add_edge(i, j);
            }
            k += 1;
        }
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_encodings() {
        // reference strings from networkx.to_graph6_bytes
        assert_eq!(encode_string(&Graph::complete(4)), "C~");
        assert_eq!(encode_string(&Graph::empty(1)), "@");
        assert_eq!(encode_string(&Graph::empty(0)), "?");
        let path = Graph::from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4)]);
        assert_eq!(encode_string(&path), "DhC");
        assert_eq!(encode_string(&Graph::cycle(5)), "Dhc");
    }

    #[test]
    fn long_size_prefix() {
        let g = Graph::cycle(63);
        let bytes = encode(&g);
        assert_eq!(&bytes[..4], &[126, 63, 63, 63 + 63]);
        assert_eq!(decode(&bytes).unwrap(), g);
        let big = Graph::cycle(378);
        let bytes = encode(&big);
        assert_eq!(&bytes[..4], &[126, 63, 63 + 5, 63 + 58]);
        assert_eq!(decode(&bytes).unwrap(), big);
    }

    #[test]
    fn header_and_newline_are_accepted() {
        let g = Graph::cycle(5);
        let mut text = b">>graph6<<".to_vec();
        text.extend(encode(&g));
        text.push(b'\n');
        assert_eq!(decode(&text).unwrap(), g);
    }

    #[test]
    fn malformed_input() {
        assert!(decode(b"").is_err());
        assert!(decode(b"C").is_err());
        assert!(decode(b"C~~").is_err());
        assert!(decode(&[126, 64]).is_err());
        assert!(decode(b"C\x20").is_err());
    }
}
