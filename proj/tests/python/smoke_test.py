"""End-to-end smoke test of the _cmsa extension module."""

import json
import os
import sys
import tempfile

import _cmsa


def main():
    with tempfile.TemporaryDirectory() as tmp:
        corpus_path = os.path.join(tmp, "corpus.json")
        with open(corpus_path, "w") as f:
            f.write(_cmsa.make_synthetic_corpus(120, 7))

        # train with the linear-SVM preset, shrunk for test speed
        model_path = os.path.join(tmp, "model.json")
        report = _cmsa.train(
            corpus_path,
            out_path=model_path,
            preset="model2",
            config_json=json.dumps({"svm": {"max_epochs": 100}}),
        )
        assert report["n_train"] == 102, report
        assert report["n_dev"] == 18, report
        assert 0.0 <= report["overall"]["f1"] <= 1.0, report
        assert os.path.exists(model_path)

        pred_path = os.path.join(tmp, "pred.json")
        _cmsa.predict(model_path, corpus_path, pred_path)
        preds = json.load(open(pred_path))
        assert len(preds) == 120
        assert all(p["sentiment"] in (-1, 0, 1) for p in preds)

        scored = _cmsa.evaluate(corpus_path, pred_path)
        assert scored["overall"]["f1"] > 0.5, scored  # scored on its own train data

        # single-text prediction
        predictor = _cmsa.Predictor(model_path)
        one = predictor.predict("acha movie hai")
        assert one["sentiment"] in (-1, 0, 1)
        assert abs(sum(one["probs"]) - 1.0) < 1e-9

    # metric helper and its fixture
    f1 = _cmsa.macro_f1([1, 1, 0, -1], [1, 0, 0, -1])
    assert abs(f1 - 7.0 / 9.0) < 1e-12, f1

    assert _cmsa.tokenize("Acha acha Hai") == ["acha", "acha", "hai"]

    # preset resolution and config errors surface as ValueError
    cfg = json.loads(_cmsa.resolve_preset("model2"))
    assert cfg["model"] == "svm"
    assert cfg["features"] == "char_ngram(2,6)"
    try:
        _cmsa.resolve_preset("model9")
    except ValueError:
        pass
    else:
        raise AssertionError("unknown preset must raise ValueError")

    print("python smoke test passed")


if __name__ == "__main__":
    sys.exit(main())
