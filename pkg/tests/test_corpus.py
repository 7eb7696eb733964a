import pytest

from hmff.corpus import (RawDocument, build_corpus, load_stopwords, make_corpus, preprocess,
                         read_corpus, read_documents, remove_stopwords, stem, tokenize,
                         write_corpus)
from hmff.errors import AllDocumentsEmpty, DataError, DuplicateId


class TestTokenize:
    def test_case_and_punctuation(self):
        assert tokenize("The cat, the CAT!") == ["the", "cat", "the", "cat"]

    def test_empty(self):
        assert tokenize("") == []

    def test_hyphen_and_digits(self):
        assert tokenize("COVID-19 spreads fast") == ["covid", "spreads", "fast"]

    def test_underscore_splits(self):
        assert tokenize("snake_case x2y") == ["snake", "case", "x", "y"]

    def test_unicode_letters_kept(self):
        assert tokenize("Café naïve") == ["café", "naïve"]


class TestStopwords:
    def test_explicit_list(self):
        assert remove_stopwords(["he", "said", "hello"], {"he", "said"}) == ["hello"]

    def test_empty(self):
        assert remove_stopwords([], {"a"}) == []

    def test_bundled_list(self):
        stops = load_stopwords()
        assert remove_stopwords(["she", "runs", "i", "run"], stops) == ["runs", "run"]
        assert len(stops) == 540
        assert {"the", "and", "of", "a"} <= stops

    def test_custom_file(self, tmp_path):
        p = tmp_path / "stops.txt"
        p.write_text("Foo\n\nbar\n")
        assert load_stopwords(p) == frozenset({"foo", "bar"})


# Vectors from the original 1980 stemmer description (step-by-step examples).
PORTER_VECTORS = {
    "caresses": "caress", "ponies": "poni", "ties": "ti", "caress": "caress", "cats": "cat",
    "feed": "feed", "agreed": "agre", "plastered": "plaster", "bled": "bled",
    "motoring": "motor", "sing": "sing", "conflated": "conflat", "troubled": "troubl",
    "sized": "size", "hopping": "hop", "tanned": "tan", "falling": "fall", "hissing": "hiss",
    "fizzed": "fizz", "failing": "fail", "filing": "file", "happy": "happi", "sky": "sky",
    "relational": "relat", "conditional": "condit", "rational": "ration",
    "valenci": "valenc", "hesitanci": "hesit", "digitizer": "digit", "conformabli": "conform",
    "radicalli": "radic", "differentli": "differ", "vileli": "vile", "analogousli": "analog",
    "vietnamization": "vietnam", "predication": "predic", "operator": "oper",
    "feudalism": "feudal", "decisiveness": "decis", "hopefulness": "hope",
    "callousness": "callous", "formaliti": "formal", "sensitiviti": "sensit",
    "sensibiliti": "sensibl", "triplicate": "triplic", "formative": "form",
    "formalize": "formal", "electriciti": "electr", "electrical": "electr",
    "hopeful": "hope", "goodness": "good", "revival": "reviv", "allowance": "allow",
    "inference": "infer", "airliner": "airlin", "gyroscopic": "gyroscop",
    "adjustable": "adjust", "defensible": "defens", "irritant": "irrit",
    "replacement": "replac", "adjustment": "adjust", "dependent": "depend",
    "adoption": "adopt", "homologou": "homolog", "communism": "commun",
    "activate": "activ", "angulariti": "angular", "homologous": "homolog",
    "effective": "effect", "bowdlerize": "bowdler", "probate": "probat", "rate": "rate",
    "cease": "ceas", "controll": "control", "roll": "roll", "generalizations": "gener",
    "oscillators": "oscil",
}


class TestPorter:
    @pytest.mark.parametrize("word,expected", sorted(PORTER_VECTORS.items()))
    def test_reference_vectors(self, word, expected):
        assert stem(word) == expected

    def test_short_words_untouched(self):
        assert stem("as") == "as"
        assert stem("a") == "a"

    def test_martin_mode_extensions(self):
        assert stem("conformabli") == "conform"
        assert stem("conformabli", "martin") == "conform"
        assert stem("possibli", "original") == "possibli"
        assert stem("possibli", "martin") == "possibl"
        assert stem("analogi", "martin") == "analog"

    def test_agrees_with_nltk_original_mode(self):
        nltk_porter = pytest.importorskip("nltk.stem.porter")
        ref = nltk_porter.PorterStemmer(mode=nltk_porter.PorterStemmer.ORIGINAL_ALGORITHM)
        words = sorted(set(tokenize(
            "connection connections connective connected connecting relational generalization "
            "hopefulness happiness sensational running runner ran bellies emergency "
            "agreement disagreement national nationalize internationalization probabilities "
            "feudalism argument arguing argued computational computing computer organizer "
            "universities university differently troubling troubled motoring plastered "
            "sized hopping falling filing conditional rationality electricity formative "
            "adjustable irritant dependence replacement adoption homologous effective "
            "bowdlerize cease controlling rolling oscillators generalizations stemming "
        )))
        mismatches = {w: (stem(w), ref.stem(w)) for w in words if stem(w) != ref.stem(w)}
        assert mismatches == {}


class TestBuildCorpus:
    def test_empty_doc_dropped(self):
        docs = [RawDocument("a", "cats run"), RawDocument("b", "the and of"),
                RawDocument("c", "dogs bark")]
        c = build_corpus(docs)
        assert c.n == 2
        assert c.ids == ["a", "c"]

    def test_pre_tokenized(self):
        c = build_corpus([RawDocument("1", "a b a")], pre_tokenized=True)
        assert c.docs == [("1", ["a", "b", "a"])]
        assert c.vocab == {"a": 0, "b": 1}

    def test_hand_counted(self):
        docs = [RawDocument("1", "Cats chase the mice; mice flee cats."),
                RawDocument("2", "The dog chases 2 cats")]
        c = build_corpus(docs)
        # doc1: cat chase mice mice flee cat; doc2: dog chase cat
        assert c.docs[0][1] == ["cat", "chase", "mice", "mice", "flee", "cat"]
        assert c.docs[1][1] == ["dog", "chase", "cat"]
        assert c.term_count == 5
        assert c.token_count == 9

    def test_all_empty(self):
        with pytest.raises(AllDocumentsEmpty):
            build_corpus([RawDocument("1", "the"), RawDocument("2", "123")])

    def test_duplicate_id(self):
        with pytest.raises(DuplicateId):
            make_corpus([("x", ["a"]), ("x", ["b"])])

    def test_preprocess_pipeline(self):
        assert preprocess("She was running quickly", load_stopwords()) == ["run", "quickli"]


class TestIO:
    def test_lines_file(self, tmp_path):
        p = tmp_path / "docs.txt"
        p.write_text("first doc\nsecond doc\n")
        docs = read_documents(p)
        assert [(d.id, d.text) for d in docs] == [("1", "first doc"), ("2", "second doc")]

    def test_directory(self, tmp_path):
        (tmp_path / "b.txt").write_text("bee")
        (tmp_path / "a.txt").write_text("ay")
        docs = read_documents(tmp_path)
        assert [d.id for d in docs] == ["a.txt", "b.txt"]

    def test_missing(self, tmp_path):
        with pytest.raises(DataError):
            read_documents(tmp_path / "nope")

    def test_round_trip(self, tmp_path):
        c = make_corpus([("d1", ["x", "y", "x"]), ("d2", ["z"])])
        write_corpus(c, tmp_path / "c.tsv")
        back = read_corpus(tmp_path / "c.tsv")
        assert back.docs == c.docs
        assert back.vocab == c.vocab
