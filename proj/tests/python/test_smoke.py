import os
import pathlib

import numpy as np
import pytest

import mbkg

GOLDEN = pathlib.Path(os.environ.get("MBKG_GOLDEN", pathlib.Path(__file__).parents[1] / "data" / "golden"))


def test_levenshtein():
    assert mbkg.levenshtein_similarity("kitten", "sitting") == pytest.approx(1 - 3 / 7)
    assert mbkg.levenshtein_similarity("zürich", "zurich") == pytest.approx(1 - 1 / 6)
    assert mbkg.levenshtein_similarity("", "") == 1.0


def test_dedup_keeps_first():
    posts = [("a", "Cloud spending is up this year"), ("b", "Cloud spending is up this year!"), ("c", "unrelated")]
    assert mbkg.dedup(posts, 0.85) == ["a", "c"]


def test_text_helpers():
    assert mbkg.normalize_tag("#Industry40") == "industry 40"
    assert mbkg.normalize_tag(mbkg.normalize_tag("#IoTSecurity")) == mbkg.normalize_tag("#IoTSecurity")
    assert mbkg.british_spelling("color") == "colour"
    assert mbkg.british_spelling("colour") == "colour"


def test_kappa():
    assert mbkg.fleiss_kappa([[3, 0], [0, 3], [3, 0]]) == pytest.approx(1.0)
    assert mbkg.cohen_kappa(list("yNyN"), list("NyNy")) == pytest.approx(-1.0)
    with pytest.raises(mbkg.UndefinedStatistic):
        mbkg.cohen_kappa(["y", "y"], ["y", "y"])


def _blobs(rng, n=40):
    centres = 10.0 * np.eye(3, 5)
    x = np.vstack([c + rng.normal(scale=0.3, size=(n, 5)) for c in centres])
    y = np.repeat(np.arange(3), n)
    return x, y


def test_silhouette_matches_numpy():
    rng = np.random.default_rng(1)
    x, y = _blobs(rng, 15)
    d = np.linalg.norm(x[:, None] - x[None], axis=-1)
    s = []
    for i in range(len(x)):
        same = (y == y[i])
        a = d[i, same].sum() / (same.sum() - 1)
        b = min(d[i, y == k].mean() for k in set(y) if k != y[i])
        s.append((b - a) / max(a, b))
    value, defined = mbkg.silhouette_mean(x, y.tolist())
    assert defined
    assert value == pytest.approx(np.mean(s), abs=1e-9)


def test_hdbscan_and_umap():
    rng = np.random.default_rng(2)
    x, y = _blobs(rng)
    labels = np.array(mbkg.hdbscan(x, min_cluster_size=10, min_samples=5))
    assert len(set(labels) - {-1}) == 3
    for k in range(3):
        assert len(set(labels[y == k]) - {-1}) == 1
    e = mbkg.umap(x, n_neighbors=10, min_dist=0.0, target_dim=2, seed=3)
    assert e.shape == (len(x), 2)
    assert np.array_equal(e, mbkg.umap(x, n_neighbors=10, min_dist=0.0, target_dim=2, seed=3))


def test_bad_array_shape():
    with pytest.raises(ValueError):
        mbkg.standardize(np.zeros(4))


def test_extract_conllu():
    text = (GOLDEN / "parses_normalized.conllu").read_text()
    triples = mbkg.extract_conllu(text)
    assert triples
    assert {"subject", "object", "verb_lemma", "path"} <= set(triples[0])


def test_golden_pipeline_and_rdflib_roundtrip(tmp_path):
    reports = mbkg.run_all(GOLDEN / "pipeline.toml", tmp_path)
    assert reports["normalize"]["retained"] <= reports["normalize"]["posts"]
    assert reports["extract"]["triples"]["total"] > 0
    assert reports["refine-emit"]["validation"]["violations"] == []

    ttl = tmp_path / "graph.ttl"
    v = mbkg.validate_graph(ttl)
    assert v["violations"] == [] and v["statements"] > 0

    rdflib = pytest.importorskip("rdflib")
    import rdflib.compare
    g = rdflib.Graph().parse(ttl, format="turtle")
    ours = rdflib.Graph().parse(data="\n".join(mbkg.parse_turtle(ttl.read_text())), format="nt")
    assert len(g) == v["triples"]
    assert rdflib.compare.isomorphic(g, ours)

    # Serialising through rdflib and back must still validate.
    again = tmp_path / "again.ttl"
    g.serialize(again, format="turtle")
    assert mbkg.validate_graph(again)["statements"] == v["statements"]


def test_missing_config():
    with pytest.raises(mbkg.InputError):
        mbkg.run_stage("normalize", "/nonexistent/pipeline.toml")
