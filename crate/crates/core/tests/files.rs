mod common;

use std::io::{BufReader, Cursor};

use bipmatch::io::{load_instance, read_instance, save_instance, write_instance};
use bipmatch::trace::{compare_trace_streams, read_trace, record_trace, TraceSink, TraceWriter};
use bipmatch::Algorithm;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::random_spec;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn instances_round_trip(seed in any::<u64>(), n in 1usize..30, s in 1usize..30, combo in 0usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_spec(&mut rng, combo, n, s).generate().unwrap();
        let mut buf = Vec::new();
        write_instance(&g, &mut buf).unwrap();
        let back = read_instance(Cursor::new(buf)).unwrap();
        prop_assert_eq!(back, g);
    }
}

#[test]
fn instance_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.txt");
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let g = random_spec(&mut rng, 3, 40, 12).generate().unwrap();
    save_instance(&g, &path).unwrap();
    assert_eq!(load_instance(&path).unwrap(), g);
}

#[test]
fn trace_file_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let g = loop {
        let g = random_spec(&mut rng, 0, 20, 20).generate().unwrap();
        if bipmatch::feasibility_precheck(&g) {
            break g;
        }
    };
    let trace = record_trace(Algorithm::GoldbergKennedy, &g, 5.0).unwrap();
    let mut writer = TraceWriter::new(Vec::new());
    for e in &trace {
        writer.record(e).unwrap();
    }
    let bytes = writer.finish().unwrap();
    let parsed: Vec<_> = read_trace(BufReader::new(&bytes[..])).collect::<Result<_, _>>().unwrap();
    assert_eq!(parsed, trace);
    let again = read_trace(BufReader::new(&bytes[..]));
    let diff = compare_trace_streams(again, trace.iter().copied().map(Ok)).unwrap();
    assert!(diff.is_none());
}
