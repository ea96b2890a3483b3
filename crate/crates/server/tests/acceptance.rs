//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! fails. Runs sequentially so the timing criteria are not disturbed.

mod common;

use std::collections::HashMap;
use std::io::{BufRead, BufReader, Read};
use std::path::Path;
use std::process::{Command, Stdio};
use std::sync::Arc;
use std::time::{Duration, Instant, SystemTime};

use axum::http::{Method, StatusCode};
use common::{call, fixture, post, reference_matrix};
use phemotion_ai::{Pipeline, ScriptedProvider};
use phemotion_core::emotion::ShapeParams;
use phemotion_core::geometry::{generate_mesh, GenSpec, Mesh, RadialField, Vec3};
use phemotion_core::{
    read_manifest, write_manifest, Binding, EmotionToken, MappingMatrix, Palette, ShapeParameterId,
};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::{json, Value};

type Verdict = Result<String, String>;
type Criterion<'a> = (&'a str, &'a dyn Fn(&tokio::runtime::Runtime) -> Verdict);

fn main() {
    let rt = tokio::runtime::Builder::new_multi_thread()
        .enable_all()
        .build()
        .unwrap();
    let criteria: [Criterion; 9] = [
        ("intensity contract", &intensity_contract),
        ("token-count contract", &token_count_contract),
        ("sphere identity", &|_| sphere_identity()),
        ("wave-count oracle", &|_| wave_count_oracle()),
        ("manifoldness", &|_| manifoldness()),
        ("determinism", &|_| determinism()),
        ("manual-mode flow", &manual_flow),
        ("preview latency", &preview_latency),
        ("privacy", &privacy),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let verdict = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| check(&rt)))
            .unwrap_or_else(|_| Err("panicked".to_owned()));
        match verdict {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name}: {detail}");
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// A surfaced intensity, as a client sees it in JSON.
fn on_grid(v: f64) -> bool {
    (0.0..=4.5).contains(&v) && ((v * 10.0).round() - v * 10.0).abs() < 1e-9
}

fn random_value(rng: &mut StdRng) -> (String, Option<f64>) {
    let v = match rng.random_range(0..7) {
        0 => rng.random_range(-10.0..10.0),
        1 => rng.random_range(0.0..4.5),
        2 => rng.random_range(4.4..4.6),
        3 => f64::from(rng.random_range(-5i32..60)) / 10.0,
        4 => rng.random_range(-1e6..1e6),
        5 => return (format!("\"{:.3}\"", rng.random_range(-1.0..6.0)), None),
        _ => return ("null".to_owned(), None),
    };
    (format!("{v}"), Some(v))
}

fn random_label(rng: &mut StdRng) -> String {
    const POOL: [&str; 12] = [
        "joy", "Joy", "fear", "awe", "grief", "calm", "pride", "hope", "unease", "envy", "relief",
        "dread",
    ];
    match rng.random_range(0..10) {
        0 => " ".to_owned(),
        1 => "x".repeat(45),
        _ => POOL[rng.random_range(0..POOL.len())].to_owned(),
    }
}

/// Surrounds or damages the JSON; the flag says whether it is still intact.
fn wrap(rng: &mut StdRng, json: String) -> (String, bool) {
    match rng.random_range(0..4) {
        0 => (json, true),
        1 => (format!("Here is my analysis:\n```json\n{json}\n```"), true),
        2 => (format!("Sure! {json} Let me know if you need more."), true),
        _ => (json.replacen('}', "", 1 + rng.random_range(0..2)), false),
    }
}

/// 1,000 hostile provider answers, half to extraction and half to scoring.
fn intensity_contract(rt: &tokio::runtime::Runtime) -> Verdict {
    let mut rng = StdRng::seed_from_u64(0x1a7e);
    let mut surfaced = 0usize;
    let mut answered = 0usize;
    let mut violations = Vec::new();
    for case in 0..1000 {
        let score_task = case % 2 == 1;
        let n = rng.random_range(if score_task { 1 } else { 4 }..11);
        let items: Vec<(String, String, Option<f64>)> = (0..n)
            .map(|_| {
                let (text, v) = random_value(&mut rng);
                (random_label(&mut rng), text, v)
            })
            .collect();
        let list = items
            .iter()
            .map(|(l, v, _)| format!("{{\"label\": {l:?}, \"intensity\": {v}}}"))
            .collect::<Vec<_>>()
            .join(", ");
        let key = if score_task { "scores" } else { "emotions" };
        let (text, intact) = wrap(&mut rng, format!("{{\"{key}\": [{list}]}}"));
        let provider = Arc::new(ScriptedProvider::texts([text]));
        let pipeline = Pipeline::new(provider, 0);
        let surfaced_values: Vec<(String, f64)> = if score_task {
            let mut labels: Vec<String> = Vec::new();
            for (l, _, _) in &items {
                if !l.trim().is_empty()
                    && l.len() <= 40
                    && !labels.iter().any(|x| x.eq_ignore_ascii_case(l))
                {
                    labels.push(l.clone());
                }
            }
            if labels.is_empty() {
                continue;
            }
            match rt.block_on(pipeline.score_intensity("story", &labels)) {
                Ok(tokens) => serde_json::to_value(&tokens)
                    .unwrap()
                    .as_array()
                    .unwrap()
                    .iter()
                    .map(|t| {
                        (
                            t["label"].as_str().unwrap().to_owned(),
                            t["intensity"].as_f64().unwrap(),
                        )
                    })
                    .collect(),
                Err(_) => continue,
            }
        } else {
            match rt.block_on(pipeline.extract_tokens("story")) {
                Ok(result) => serde_json::to_value(&result).unwrap()["tokens"]
                    .as_array()
                    .unwrap()
                    .iter()
                    .map(|t| {
                        (
                            t["label"].as_str().unwrap().to_owned(),
                            t["intensity"].as_f64().unwrap(),
                        )
                    })
                    .collect(),
                Err(_) => continue,
            }
        };
        answered += 1;
        for (label, v) in surfaced_values {
            surfaced += 1;
            if !on_grid(v) {
                violations.push(format!("case {case}: {v}"));
            }
            // numeric answers must land on the clamped, half-up rounded value;
            // damaged JSON may be recovered from a different fragment
            if !intact {
                continue;
            }
            let source = items
                .iter()
                .find(|(l, _, _)| l.eq_ignore_ascii_case(&label))
                .and_then(|x| x.2);
            if let Some(raw) = source {
                let want = ((raw.clamp(0.0, 4.5) * 10.0 + 0.5 + 1e-9).floor()) / 10.0;
                if (want - v).abs() > 1e-9 && score_task {
                    violations.push(format!(
                        "case {case}: {raw} surfaced as {v}, expected {want}"
                    ));
                }
            }
        }
    }
    ensure(violations.is_empty(), || {
        format!("{} violations, first: {}", violations.len(), violations[0])
    })?;
    ensure(surfaced > 1000, || {
        format!("only {surfaced} values surfaced")
    })?;
    Ok(format!(
        "1000 outputs, {answered} accepted, {surfaced} intensities, 0 violations"
    ))
}

fn token_count_contract(rt: &tokio::runtime::Runtime) -> Verdict {
    let pipeline = Pipeline::mock(0);
    let mut entries: Vec<_> = std::fs::read_dir(fixture("transcripts"))
        .map_err(|e| e.to_string())?
        .map(|e| e.unwrap().path())
        .collect();
    entries.sort();
    ensure(entries.len() == 20, || {
        format!("{} fixtures", entries.len())
    })?;
    let mut sizes = Vec::new();
    for path in &entries {
        let text = std::fs::read_to_string(path).map_err(|e| e.to_string())?;
        let result = rt
            .block_on(pipeline.extract_tokens(&text))
            .map_err(|e| format!("{}: {e}", path.display()))?;
        let n = result.tokens.len();
        let mut keys: Vec<String> = result
            .tokens
            .iter()
            .map(|t| t.label.as_str().to_lowercase())
            .collect();
        keys.sort();
        keys.dedup();
        ensure((4..=7).contains(&n) && keys.len() == n, || {
            format!("{}: {n} tokens", path.display())
        })?;
        sizes.push(n);
    }
    Ok(format!("20 transcripts, token counts {sizes:?}"))
}

fn sphere_identity() -> Verdict {
    let mut rng = StdRng::seed_from_u64(77);
    let seeds: Vec<u64> = (0..10).map(|_| rng.random()).collect();
    let start = Instant::now();
    let mut worst = 0.0f64;
    for s in 0..=5u8 {
        for &seed in &seeds {
            let mesh = generate_mesh(&GenSpec::<f64>::new(ShapeParams::neutral(), seed, s))
                .map_err(|e| e.to_string())?;
            for v in &mesh.vertices {
                worst = worst.max((v.norm() - 1.0).abs());
            }
        }
    }
    let elapsed = start.elapsed();
    ensure(worst < 1e-9, || format!("max deviation {worst:e}"))?;
    ensure(elapsed < Duration::from_secs(5), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!(
        "max deviation {worst:e} over 60 meshes in {elapsed:.2?}"
    ))
}

fn wave_count_oracle() -> Verdict {
    let mut passed = 0;
    let mut report = Vec::new();
    for w in 1..=12u32 {
        let mut p = ShapeParams::<f64>::neutral();
        p.waves = w;
        let field = RadialField::new(p, 0);
        let n = 4096;
        let profile: Vec<f64> = (0..n)
            .map(|k| {
                let phi = std::f64::consts::TAU * k as f64 / n as f64;
                field.radius(Vec3::new(phi.cos(), phi.sin(), 0.0))
            })
            .collect();
        let maxima = (0..n)
            .filter(|&k| {
                profile[k] > profile[(k + n - 1) % n] && profile[k] >= profile[(k + 1) % n]
            })
            .count();
        if maxima == w as usize {
            passed += 1;
        } else {
            report.push(format!("w={w}: {maxima}"));
        }
    }
    ensure(passed == 12, || {
        format!("{passed}/12, {}", report.join(", "))
    })?;
    Ok("12/12".to_owned())
}

fn edge_faces(mesh: &Mesh<f64>) -> HashMap<(u32, u32), usize> {
    let mut count = HashMap::new();
    for &[a, b, c] in &mesh.faces {
        for (u, v) in [(a, b), (b, c), (c, a)] {
            *count.entry((u.min(v), u.max(v))).or_insert(0) += 1;
        }
    }
    count
}

fn manifoldness() -> Verdict {
    for s in 0..=4u8 {
        let mesh = generate_mesh(&GenSpec::new(ShapeParams::full_scale(), 3, s))
            .map_err(|e| e.to_string())?;
        let k = 4usize.pow(u32::from(s));
        ensure(mesh.vertex_count() == 10 * k + 2, || {
            format!("s={s}: {} vertices", mesh.vertex_count())
        })?;
        ensure(mesh.face_count() == 20 * k, || {
            format!("s={s}: {} faces", mesh.face_count())
        })?;
        let edges = edge_faces(&mesh);
        let bad = edges.values().filter(|&&c| c != 2).count();
        ensure(bad == 0, || {
            format!("s={s}: {bad} edges not shared by exactly two faces")
        })?;
        ensure(edges.len() == 30 * k, || {
            format!("s={s}: {} edges", edges.len())
        })?;
    }
    Ok("subdivisions 0-4: every edge in 2 faces, counts 10*4^s+2 / 20*4^s".to_owned())
}

const LABELS: [&str; 10] = [
    "Nostalgia",
    "Happiness",
    "Worry",
    "Anticipation",
    "Satisfaction",
    "grief",
    "awe",
    "calm",
    "fear",
    "pride",
];

fn random_matrix(rng: &mut StdRng) -> MappingMatrix {
    let mut initial: Vec<EmotionToken> = Vec::new();
    for l in LABELS {
        if !rng.random_bool(0.6) {
            continue;
        }
        let v = f64::from(rng.random_range(0u8..=45)) / 10.0;
        initial.push(if rng.random() {
            EmotionToken::suggested(l, v).unwrap()
        } else {
            EmotionToken::user(l, v).unwrap()
        });
    }
    let mut palette = Palette::from_initial(initial).unwrap();
    for _ in 0..rng.random_range(0..8) {
        let l = LABELS[rng.random_range(0..LABELS.len())];
        let v = f64::from(rng.random_range(0u8..=45)) / 10.0;
        let next = match rng.random_range(0..4) {
            0 => palette.add(l, v),
            1 => palette.rescore(l, v),
            2 => palette.rename(l, &format!("{l} {}", rng.random_range(0..9))),
            _ => palette.delete(l),
        };
        if let Ok(p) = next {
            palette = p;
        }
    }
    let mut bindings = Vec::new();
    for id in ShapeParameterId::ALL {
        if !palette.is_empty() && rng.random_bool(0.7) {
            let t = &palette.tokens()[rng.random_range(0..palette.len())];
            bindings.push(Binding::new(t.label.as_str(), id).unwrap());
        }
    }
    MappingMatrix::new(palette, bindings).unwrap()
}

fn determinism() -> Verdict {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let manifest = fixture("reference_manifest.json");
    let mut outputs = Vec::new();
    for name in ["first.obj", "second.obj"] {
        let out = dir.path().join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_phemotion"))
            .args([
                "render",
                "--manifest",
                manifest.to_str().unwrap(),
                "--out",
                out.to_str().unwrap(),
            ])
            .status()
            .map_err(|e| e.to_string())?;
        ensure(status.success(), || format!("render exited with {status}"))?;
        outputs.push(std::fs::read(&out).map_err(|e| e.to_string())?);
    }
    ensure(outputs[0] == outputs[1], || {
        "render outputs differ".to_owned()
    })?;
    ensure(!outputs[0].is_empty(), || "empty OBJ".to_owned())?;

    let mut rng = StdRng::seed_from_u64(500);
    for case in 0..500 {
        let m = random_matrix(&mut rng);
        let spec = GenSpec::new(m.resolve(), rng.random(), rng.random_range(0..=6));
        let bytes = write_manifest(&m, &spec).map_err(|e| format!("case {case}: {e}"))?;
        let (m2, spec2) = read_manifest::<f64>(&bytes).map_err(|e| format!("case {case}: {e}"))?;
        ensure(m2 == m && spec2 == spec, || {
            format!("case {case}: round trip changed the matrix")
        })?;
        let again = write_manifest(&m2, &spec2).map_err(|e| e.to_string())?;
        ensure(again == bytes, || format!("case {case}: rewrite differs"))?;
    }
    Ok(format!(
        "render x2 byte-identical ({} bytes), 500/500 manifest round trips",
        outputs[0].len()
    ))
}

fn manual_flow(rt: &tokio::runtime::Runtime) -> Verdict {
    rt.block_on(async {
        let app = common::app(None);
        let start = Instant::now();
        let r = call(&app, Method::POST, "/api/session", None, None).await;
        ensure(
            r.status == StatusCode::CREATED && r.json()["mode"] == "manual",
            || "session".into(),
        )?;
        let id = r.json()["session_id"].as_str().unwrap().to_owned();
        let edits = [
            json!({"kind": "add", "target_label": "Nostalgia", "payload": 4.0}),
            json!({"kind": "add", "target_label": "Happiness", "payload": 3.0}),
            json!({"kind": "add", "target_label": "Anticipation", "payload": 3.0}),
            json!({"kind": "add", "target_label": "Worry", "payload": 2.0}),
            json!({"kind": "add", "target_label": "Satisfaction", "payload": 3.0}),
            json!({"kind": "rescore", "target_label": "Happiness", "payload": 3.5}),
            json!({"kind": "add", "target_label": "scratch", "payload": 1.0}),
            json!({"kind": "delete", "target_label": "scratch"}),
        ];
        let mut palette = Value::Null;
        for (seq, mut e) in edits.into_iter().enumerate() {
            e["sequence"] = json!(seq);
            let r = post(
                &app,
                "/api/palette/edit",
                json!({"session_id": id, "event": e}),
            )
            .await;
            ensure(r.status == StatusCode::OK, || {
                format!("edit {seq}: {}", r.status)
            })?;
            palette = r.json();
        }
        let reference = reference_matrix();
        let bindings = serde_json::to_value(reference.bindings()).unwrap();
        let r = post(
            &app,
            "/api/resolve",
            json!({"palette": palette, "bindings": bindings}),
        )
        .await;
        ensure(r.status == StatusCode::OK, || {
            format!("resolve: {}", r.status)
        })?;
        let params = r.json();
        ensure(
            params == serde_json::to_value(reference.resolve::<f64>()).unwrap(),
            || "resolved params differ from the worked example".into(),
        )?;
        let r = post(
            &app,
            "/api/mesh",
            json!({"params": params, "seed": 2024, "subdivision": 4}),
        )
        .await;
        ensure(
            r.status == StatusCode::OK && r.json()["vertex_count"] == 2562,
            || format!("mesh: {}", r.status),
        )?;
        let r = post(
            &app,
            "/api/export",
            json!({"palette": palette, "bindings": bindings, "seed": 2024, "subdivision": 4}),
        )
        .await;
        ensure(r.status == StatusCode::OK, || {
            format!("export: {}", r.status)
        })?;
        let elapsed = start.elapsed();
        let mut zip = zip::ZipArchive::new(std::io::Cursor::new(r.body.to_vec()))
            .map_err(|e| e.to_string())?;
        let names: Vec<String> = (0..zip.len())
            .map(|i| zip.by_index(i).unwrap().name().unwrap().to_string())
            .collect();
        ensure(names == ["shape.obj", "manifest.json"], || {
            format!("archive holds {names:?}")
        })?;
        let mut manifest = Vec::new();
        zip.by_name("manifest.json")
            .unwrap()
            .read_to_end(&mut manifest)
            .unwrap();
        let (m, spec) = read_manifest::<f64>(&manifest).map_err(|e| e.to_string())?;
        ensure(
            spec.params == reference.resolve::<f64>() && m.bindings() == reference.bindings(),
            || "manifest content".into(),
        )?;
        ensure(elapsed < Duration::from_secs(1), || {
            format!("took {elapsed:?}")
        })?;
        Ok(format!(
            "session, 8 edits, resolve, mesh, export in {elapsed:.2?}"
        ))
    })
}

fn preview_latency(rt: &tokio::runtime::Runtime) -> Verdict {
    rt.block_on(async {
        let state = Arc::new(phemotion_server::AppState::new(
            phemotion_server::ServerConfig::default(),
            None,
        ));
        let listener = tokio::net::TcpListener::bind("127.0.0.1:0")
            .await
            .map_err(|e| e.to_string())?;
        let addr = listener.local_addr().unwrap();
        let server =
            tokio::spawn(
                async move { axum::serve(listener, phemotion_server::router(state)).await },
            );
        let client = reqwest::Client::new();
        let url = format!("http://{addr}/api/mesh");
        let mut rng = StdRng::seed_from_u64(4);
        let mut times = Vec::with_capacity(100);
        for i in 0..101 {
            let params = json!({
                "number_of_waves": rng.random_range(0..=12),
                "global_distortion": rng.random_range(0.0..=0.5),
                "global_frequency": rng.random_range(0.5..=4.0),
                "surface_distortion": rng.random_range(0.0..=0.25),
                "surface_frequency": rng.random_range(2.0..=10.0),
            });
            let start = Instant::now();
            let res = client
                .post(&url)
                .json(&json!({"params": params, "seed": i, "subdivision": 4}))
                .send()
                .await
                .map_err(|e| e.to_string())?;
            ensure(res.status() == 200, || format!("status {}", res.status()))?;
            let body = res.bytes().await.map_err(|e| e.to_string())?;
            let elapsed = start.elapsed();
            ensure(!body.is_empty(), || "empty body".into())?;
            // first request warms the connection
            if i > 0 {
                times.push(elapsed);
            }
        }
        server.abort();
        times.sort();
        let p95 = times[94];
        ensure(p95 < Duration::from_millis(200), || format!("p95 {p95:?}"))?;
        Ok(format!(
            "p95 {p95:.2?}, median {:.2?} over 100 requests",
            times[49]
        ))
    })
}

fn files_containing(
    root: &Path,
    needles: &[&str],
    since: Option<SystemTime>,
    hits: &mut Vec<String>,
) -> usize {
    let mut scanned = 0;
    for entry in walkdir::WalkDir::new(root)
        .into_iter()
        .filter_map(Result::ok)
    {
        if !entry.file_type().is_file() {
            continue;
        }
        if let Some(t) = since {
            match entry.metadata().ok().and_then(|m| m.modified().ok()) {
                Some(m) if m >= t => {}
                _ => continue,
            }
        }
        let Ok(bytes) = std::fs::read(entry.path()) else {
            continue;
        };
        scanned += 1;
        for n in needles {
            if bytes.windows(n.len()).any(|w| w == n.as_bytes()) {
                hits.push(entry.path().display().to_string());
            }
        }
    }
    scanned
}

/// Full AI-assisted session against a real `serve` process, then a scan of
/// every place it could have written to.
fn privacy(rt: &tokio::runtime::Runtime) -> Verdict {
    let started = SystemTime::now();
    let root = tempfile::tempdir().map_err(|e| e.to_string())?;
    for d in ["work", "home", "tmp"] {
        std::fs::create_dir(root.path().join(d)).unwrap();
    }
    let config = root.path().join("work/config.json");
    std::fs::write(
        &config,
        r#"{"bind": "127.0.0.1:0", "provider": {"kind": "mock", "seed": 5}}"#,
    )
    .unwrap();
    let log_path = root.path().join("server.log");
    let log = std::fs::File::create(&log_path).unwrap();
    let mut child = Command::new(env!("CARGO_BIN_EXE_phemotion"))
        .args(["serve", "--config", config.to_str().unwrap()])
        .current_dir(root.path().join("work"))
        .env("HOME", root.path().join("home"))
        .env("TMPDIR", root.path().join("tmp"))
        .stdout(Stdio::piped())
        .stderr(Stdio::from(log))
        .spawn()
        .map_err(|e| e.to_string())?;
    let mut line = String::new();
    BufReader::new(child.stdout.take().unwrap())
        .read_line(&mut line)
        .map_err(|e| e.to_string())?;
    let base = line
        .trim()
        .rsplit(' ')
        .next()
        .unwrap_or_default()
        .to_owned();

    let marker = format!("quillwort{:016x}", StdRng::from_os_rng().random::<u64>());
    let sentences = [
        format!("When I think of {marker} I remember the joy of the harbour at dusk"),
        format!("and the fear that {marker} would be gone by morning, a nostalgic ache"),
    ];
    let session = rt.block_on(async {
        let client = reqwest::Client::new();
        let post = |path: &str, body: Value| {
            let req = client.post(format!("{base}{path}")).json(&body);
            async move {
                let res = req.send().await.map_err(|e| e.to_string())?;
                let status = res.status().as_u16();
                let bytes = res.bytes().await.map_err(|e| e.to_string())?;
                Ok::<_, String>((status, bytes))
            }
        };
        let (status, body) = post("/api/session", json!({})).await?;
        ensure(status == 201, || format!("session: {status}"))?;
        let id = serde_json::from_slice::<Value>(&body).unwrap()["session_id"]
            .as_str()
            .unwrap()
            .to_owned();
        for s in &sentences {
            let (status, _) = post("/api/chat", json!({"session_id": id, "message": s})).await?;
            ensure(status == 200, || format!("chat: {status}"))?;
        }
        let (status, _) = post("/api/chat", json!({"session_id": id, "nudge": true})).await?;
        ensure(status == 200, || format!("nudge: {status}"))?;
        let (status, body) = post("/api/extract", json!({"session_id": id})).await?;
        ensure(status == 200, || format!("extract: {status}"))?;
        let extracted: Value = serde_json::from_slice(&body).unwrap();
        let labels: Vec<Value> = extracted["tokens"]
            .as_array()
            .unwrap()
            .iter()
            .map(|t| t["label"].clone())
            .collect();
        let (status, body) =
            post("/api/score", json!({"session_id": id, "labels": labels})).await?;
        ensure(status == 200, || format!("score: {status}"))?;
        let palette = serde_json::from_slice::<Value>(&body).unwrap()["palette"].clone();
        let (status, _) = post(
            "/api/export",
            json!({"palette": palette, "bindings": [], "seed": 1, "subdivision": 2}),
        )
        .await?;
        ensure(status == 200, || format!("export: {status}"))?;
        let res = client
            .delete(format!("{base}/api/session/{id}"))
            .send()
            .await
            .map_err(|e| e.to_string())?;
        ensure(res.status() == 204, || format!("delete: {}", res.status()))?;
        Ok::<_, String>(())
    });
    let _ = Command::new("kill")
        .args(["-TERM", &child.id().to_string()])
        .status();
    let deadline = Instant::now() + Duration::from_secs(5);
    while child.try_wait().ok().flatten().is_none() && Instant::now() < deadline {
        std::thread::sleep(Duration::from_millis(20));
    }
    let _ = child.kill();
    let _ = child.wait();
    session?;

    let log_text = std::fs::read_to_string(&log_path).unwrap_or_default();
    ensure(log_text.contains("/api/chat"), || {
        "server log is missing request lines".into()
    })?;
    let needles = [marker.as_str(), "the harbour at dusk", "gone by morning"];
    let mut hits = Vec::new();
    let mut scanned = files_containing(root.path(), &needles, None, &mut hits);
    scanned += files_containing(&std::env::temp_dir(), &needles, Some(started), &mut hits);
    if let Some(target) = Path::new(env!("CARGO_BIN_EXE_phemotion")).parent() {
        scanned += files_containing(target, &needles, Some(started), &mut hits);
    }
    ensure(hits.is_empty(), || {
        format!("transcript text found in {hits:?}")
    })?;
    // the scanner itself must notice a planted copy
    std::fs::write(root.path().join("tmp/canary"), &sentences[0]).unwrap();
    files_containing(root.path(), &needles, None, &mut hits);
    ensure(
        !hits.is_empty() && hits.iter().all(|h| h.ends_with("canary")),
        || format!("scanner missed the canary: {hits:?}"),
    )?;
    Ok(format!(
        "{scanned} files scanned after the session, no transcript substrings"
    ))
}
