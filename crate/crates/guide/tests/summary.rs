use std::path::Path;

#[test]
fn every_chapter_is_compiled() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR"));
    let summary = std::fs::read_to_string(root.join("../../book/src/SUMMARY.md")).unwrap();
    let lib = std::fs::read_to_string(root.join("src/lib.rs")).unwrap();
    let chapters: Vec<&str> = summary
        .lines()
        .filter_map(|l| l.split("](").nth(1))
        .map(|rest| rest.trim_end_matches(')'))
        .collect();
    assert!(!chapters.is_empty());
    for ch in chapters {
        assert!(lib.contains(&format!("book/src/{ch}\"")), "{ch} is not included in the guide crate");
    }
}
