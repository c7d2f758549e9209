import importlib.util
import json

import pytest

from emorole import attach_sidecar, load_sidecar, parse_conllu, validate

from .convert_text import assemble_interchange, convert, main

SPACY_AVAILABLE = importlib.util.find_spec("spacy") is not None

SAMPLE = [
    {
        "text": "Mes compétences sont attaquées par Marc",
        "tokens": [
            {"surface": "Mes", "lemma": "mon", "upos": "DET", "head": 1, "deprel": "det"},
            {"surface": "compétences", "lemma": "compétence", "upos": "NOUN",
             "head": 3, "deprel": "nsubj:pass"},
            {"surface": "sont", "lemma": "être", "upos": "AUX", "head": 3,
             "deprel": "aux:pass"},
            {"surface": "attaquées", "lemma": "attaquer", "upos": "VERB", "head": -1,
             "deprel": "root", "feats": {"Voice": "Pass"}},
            {"surface": "par", "lemma": "par", "upos": "ADP", "head": 5, "deprel": "case"},
            {"surface": "Marc", "lemma": "Marc", "upos": "PROPN", "head": 3,
             "deprel": "obl:agent"},
        ],
        "chunks": [(0, 2)],
    },
]


def _validated(conllu_text, sidecar_text, doc_id):
    doc = parse_conllu(conllu_text, doc_id=doc_id)
    doc = attach_sidecar(doc, load_sidecar(sidecar_text))
    return doc, validate(doc)


def test_assembled_output_passes_validation():
    conllu_text, sidecar_text = assemble_interchange(SAMPLE, "marc", "fr")
    doc, violations = _validated(conllu_text, sidecar_text, "marc")
    assert violations == []
    assert len(doc.sentences[0]) == 6
    assert doc.sentences[0].tokens[3].surface == "attaquées"
    assert doc.sentences[0].chunks[0].end == 2


def test_empty_input_needs_no_models(tmp_path):
    conllu_text, sidecar_text = convert("", "fr", "empty")
    assert conllu_text == ""
    data = json.loads(sidecar_text)
    assert data["doc_id"] == "empty"
    assert data["chains"] == [] and data["chunks"] == []
    doc, violations = _validated(conllu_text, sidecar_text, "empty")
    assert violations == []
    assert doc.sentences == ()


def test_chains_serialize():
    chains = [[(0, 0, 1), (0, 5, 6)]]
    _, sidecar_text = assemble_interchange(SAMPLE, "marc", "fr", chains=chains)
    data = json.loads(sidecar_text)
    assert data["chains"][0]["mentions"][1] == {"sent": 0, "start": 5, "end": 6}


def test_meta_records_pipeline_versions():
    _, sidecar_text = assemble_interchange(SAMPLE, "marc", "fr",
                                           meta={"pipeline": "spacy=x"})
    assert json.loads(sidecar_text)["meta"] == {"pipeline": "spacy=x"}


@pytest.mark.skipif(SPACY_AVAILABLE, reason="spacy installed; error path untestable")
def test_missing_models_exit_with_setup_help(tmp_path, capsys):
    infile = tmp_path / "in.txt"
    infile.write_text("Mes compétences sont attaquées par Marc.", encoding="utf-8")
    with pytest.raises(SystemExit) as err:
        main(["--in", str(infile), "--language", "fr", "--out-dir", str(tmp_path / "out")])
    message = str(err.value)
    assert "spacy" in message
    assert "python -m spacy download" in message


@pytest.mark.skipif(not SPACY_AVAILABLE, reason="needs spacy + models")
def test_full_conversion_validates(tmp_path):
    infile = tmp_path / "in.txt"
    infile.write_text("Mes compétences sont attaquées par Marc.", encoding="utf-8")
    out = tmp_path / "out"
    rc = main(["--in", str(infile), "--language", "fr", "--out-dir", str(out)])
    assert rc == 0
    doc, violations = _validated((out / "source.conllu").read_text(encoding="utf-8"),
                                 (out / "sidecar.json").read_text(encoding="utf-8"),
                                 "in")
    assert violations == []
    assert len(doc.sentences[0]) >= 6


def test_cli_writes_files_for_empty_input(tmp_path):
    infile = tmp_path / "in.txt"
    infile.write_text("   \n", encoding="utf-8")
    out = tmp_path / "out"
    rc = main(["--in", str(infile), "--language", "en", "--out-dir", str(out)])
    assert rc == 0
    assert (out / "source.conllu").read_text(encoding="utf-8") == ""
    assert json.loads((out / "sidecar.json").read_text(encoding="utf-8"))["doc_id"] == "in"
