"""
SpanTag command-line application
Wires the corpus, tagging, context, model and scoring modules into the
span identification and technique classification pipelines
"""

import argparse
import logging
import math
import os
import sys
from collections import defaultdict

import numpy as np

# Add the project root to path for imports
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

# Import project modules
import config
from src.analytics import (
    OFFICIAL_TECHNIQUES,
    CategoryMap,
    Grouping,
    LengthUnit,
    class_histogram,
    class_histogram_to_csv,
    compare_span_lengths,
    histograms_to_csv,
    sequence_statistics,
    span_length_distribution,
)
from src.context import ContextKind, build_tc_dataset, parse_context_pairs, write_context_pairs
from src.corpus import (
    UNKNOWN_TECHNIQUE,
    AnnotationKind,
    CorpusManager,
    SpanAnnotation,
    build_label_inventory,
    load_annotations,
    write_annotations,
)
from src.encoder import CombinationStrategy, HashingEncoder
from src.errors import DataError, TagSchemeError, UsageError
from src.models import (
    ClassifierModel,
    TaggerModel,
    TrainConfig,
    load_model,
    predict_si,
    predict_tc_batch,
    save_model,
    train_si,
    train_tc,
)
from src.scorer import score_si, score_tc
from src.tagcodec import TaggingScheme, convert, decode, encode, format_tags, parse_tags, validate
from src.tokenizer import split_sentences
from utils.file_utils import read_text, write_atomic
from utils.manifest import build_manifest, changed_inputs, load_manifest, write_manifest
from utils.report_formatter import (
    format_si_report,
    format_si_summary,
    format_stats,
    format_tc_report,
    format_tc_summary,
)

logger = logging.getLogger(__name__)

# CLI flags whose dest is a PipelineConfig field
CONFIG_FLAGS = (
    "scheme", "strategy", "alpha", "hidden_dim", "context_kind", "context_cap",
    "cap_includes_fragment", "dim", "learning_rate", "epochs", "batch_size", "seed",
    "split", "class_weighting", "length_feature", "length_unit", "grouping", "bin_width",
)


class CliParser(argparse.ArgumentParser):
    """ArgumentParser that raises UsageError instead of exiting"""

    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def split_train_dev(items, fraction, seed):
    """
    Split article ids into train and dev parts.

    Items are sorted, shuffled with a seeded generator, and the first
    round(fraction * N) become the training part.

    Args:
        items (iterable): Article ids
        fraction (float): Training share in (0, 1]
        seed (int): Shuffle seed

    Returns:
        tuple: (train, dev) sorted lists
    """
    ordered = sorted(items)
    if not ordered:
        raise DataError("cannot split an empty set of articles")
    if not 0.0 < fraction <= 1.0:
        raise ValueError(f"split fraction must lie in (0, 1], got {fraction}")

    order = np.random.default_rng(seed).permutation(len(ordered))
    n_train = int(math.floor(fraction * len(ordered) + 0.5))
    train = sorted(ordered[i] for i in order[:n_train])
    dev = sorted(ordered[i] for i in order[n_train:])
    return train, dev


def _article_order(article_id):
    return (int(article_id), article_id) if article_id.isdigit() else (math.inf, article_id)


class SpanTagApp:
    """Main application class for SpanTag"""

    def __init__(self):
        self.parser = self._build_parser()
        self.argv = []
        self.args = None
        self.settings = None
        self.show_progress = config.SHOW_PROGRESS

    def _build_parser(self):
        common = CliParser(add_help=False)
        common.add_argument("--config", help="flat key=value config file")
        common.add_argument("--seed", type=int, help=f"random seed (fallback: ${config.SEED_ENV_VAR})")
        common.add_argument("--log-level", default=config.LOG_LEVEL,
                            choices=["DEBUG", "INFO", "WARNING", "ERROR"])
        common.add_argument("--quiet", action="store_true", help="hide progress bars")

        tagging = CliParser(add_help=False)
        tagging.add_argument("--scheme", help="PNP, BIO, BIOE or BIOES")

        training = CliParser(add_help=False)
        training.add_argument("--dim", type=int, help="encoder dimension")
        training.add_argument("--learning-rate", dest="learning_rate", type=float)
        training.add_argument("--epochs", type=int)
        training.add_argument("--batch-size", dest="batch_size", type=int)
        training.add_argument("--split", type=float, help="training share of the articles, in (0, 1]")
        training.add_argument("--class-weighting", dest="class_weighting",
                              action=argparse.BooleanOptionalAction, default=None)

        contexts = CliParser(add_help=False)
        contexts.add_argument("--context", dest="context_kind", help="SENTENCE, TITLE or NONE")
        contexts.add_argument("--cap", dest="context_cap", type=int, help="context word budget")
        contexts.add_argument("--cap-includes-fragment", dest="cap_includes_fragment",
                              action=argparse.BooleanOptionalAction, default=None)

        classifying = CliParser(add_help=False)
        classifying.add_argument("--strategy", help="NONE, CONCAT_TEXT, CONCAT_EMBED, CONCAT_EMBED_HIDDEN, ADD or WEIGHTED_AVG")
        classifying.add_argument("--alpha", type=float, help="weight of the fragment vector, WEIGHTED_AVG only")
        classifying.add_argument("--hidden-dim", dest="hidden_dim", type=int, help="reduced context size")
        classifying.add_argument("--length-feature", dest="length_feature",
                                 action=argparse.BooleanOptionalAction, default=None)
        classifying.add_argument("--vectors", help="TSV of precomputed vectors keyed by fragment, title or context")

        parser = CliParser(prog="spantag", description="Propaganda span identification and technique classification")
        commands = parser.add_subparsers(dest="command", metavar="COMMAND", required=True)

        def command(name, help_text, parents=()):
            return commands.add_parser(name, help=help_text, description=help_text, parents=[common, *parents])

        sub = command("ingest", "Validate a corpus and print its statistics")
        sub.add_argument("--articles", required=True)
        sub.add_argument("--labels", help="SI or TC label file or directory")

        sub = command("encode-tags", "Tag every sentence of a corpus from SI spans", [tagging])
        sub.add_argument("--articles", required=True)
        sub.add_argument("--labels", required=True)
        sub.add_argument("--output")

        sub = command("decode-tags", "Turn per-sentence tag lines back into SI spans", [tagging])
        sub.add_argument("--articles", required=True)
        sub.add_argument("--tags", required=True)
        sub.add_argument("--output")

        sub = command("convert-tags", "Re-tag tag lines under another scheme")
        sub.add_argument("--from", dest="source_scheme", required=True)
        sub.add_argument("--to", dest="target_scheme", required=True)
        sub.add_argument("--input", help="tag lines (default: stdin)")
        sub.add_argument("--output")

        for name, help_text in (("score-si", "Score predicted spans against gold spans"),
                                ("score-tc", "Score predicted techniques against gold techniques")):
            sub = command(name, help_text)
            sub.add_argument("--pred", required=True)
            sub.add_argument("--gold", required=True)
            sub.add_argument("--output", help="TSV report")

        sub = command("extract-context", "Write fragment/context pairs for TC annotations", [contexts])
        sub.add_argument("--articles", required=True)
        sub.add_argument("--labels", required=True)
        sub.add_argument("--output")

        sub = command("train-si", "Train the span tagger", [tagging, training])
        sub.add_argument("--articles", required=True)
        sub.add_argument("--labels", required=True)
        sub.add_argument("--output", required=True, help="model file")

        sub = command("predict-si", "Predict propaganda spans with a trained tagger")
        sub.add_argument("--articles", required=True)
        sub.add_argument("--model", required=True)
        sub.add_argument("--output")

        sub = command("train-tc", "Train the technique classifier", [training, contexts, classifying])
        sub.add_argument("--articles")
        sub.add_argument("--labels")
        sub.add_argument("--pairs", help="fragment/context pairs written by extract-context, instead of --articles and --labels")
        sub.add_argument("--category", type=int, choices=[1, 2],
                         help="train only on the techniques of one span-length category")
        sub.add_argument("--output", required=True, help="model file")

        sub = command("predict-tc", "Predict techniques for given fragments", [contexts])
        sub.add_argument("--articles", required=True)
        sub.add_argument("--labels", required=True, help="fragments to classify (SI spans or a TC template)")
        sub.add_argument("--model", required=True)
        sub.add_argument("--vectors")
        sub.add_argument("--output")

        sub = command("stats", "Write class and span-length analytics as CSV")
        sub.add_argument("--labels", required=True)
        sub.add_argument("--articles", help="needed for word lengths")
        sub.add_argument("--pred", help="predicted spans to compare average lengths with")
        sub.add_argument("--unit", dest="length_unit", help="CHARS or WORDS")
        sub.add_argument("--grouping", help="TECHNIQUE, CATEGORY or ALL")
        sub.add_argument("--bin-width", dest="bin_width", type=int)
        sub.add_argument("--output-dir", dest="output_dir", required=True)

        sub = command("replay", "Re-run a recorded pipeline from its manifest")
        sub.add_argument("--manifest", required=True)
        sub.add_argument("--output", help="write the output here instead of the recorded path")
        return parser

    # configuration

    def resolve_config(self, args):
        """
        Effective configuration: flags over the config file over the seed
        environment variable over config.py defaults.
        """
        pipeline = config.PipelineConfig()
        env_seed = os.environ.get(config.SEED_ENV_VAR)
        if env_seed:
            pipeline = self._apply(pipeline, {"seed": env_seed}, config.SEED_ENV_VAR)
        if args.config:
            try:
                values = config.load_config_file(args.config)
            except OSError as e:
                raise UsageError(f"cannot read config file {args.config}: {e.strerror}") from None
            except ValueError as e:
                raise UsageError(str(e)) from None
            pipeline = self._apply(pipeline, values, args.config)
        flags = {key: getattr(args, key) for key in CONFIG_FLAGS if hasattr(args, key)}
        return self._apply(pipeline, flags, "command line")

    @staticmethod
    def _apply(pipeline, values, source):
        try:
            return pipeline.updated(values)
        except KeyError as e:
            raise UsageError(f"{source}: unknown config key {e.args[0]!r}") from None
        except ValueError as e:
            raise UsageError(f"{source}: {e}") from None

    @staticmethod
    def _parse_choice(parse, value, what):
        try:
            return parse(value)
        except (DataError, KeyError):
            raise UsageError(f"unknown {what} {value!r}") from None

    def scheme(self, name=None):
        return self._parse_choice(TaggingScheme.parse, name or self.settings.scheme, "tagging scheme")

    def context_kind(self):
        return self._parse_choice(ContextKind.parse, self.settings.context_kind, "context kind")

    def strategy(self):
        s = self.settings
        try:
            strategy = CombinationStrategy.from_names(s.strategy, s.alpha, s.hidden_dim)
            strategy.output_dim(s.dim)
            return strategy
        except (DataError, ValueError) as e:
            raise UsageError(f"bad combination strategy: {e}") from None

    def train_config(self):
        s = self.settings
        try:
            return TrainConfig(learning_rate=s.learning_rate, epochs=s.epochs, batch_size=s.batch_size,
                               seed=s.seed, dim=s.dim, class_weighting=s.class_weighting,
                               show_progress=self.show_progress)
        except ValueError as e:
            raise UsageError(str(e)) from None

    # input and output

    def load_articles(self, path):
        return CorpusManager(path, show_progress=self.show_progress).load_all()

    def emit(self, text, output, inputs):
        """Write an output atomically with its manifest, or print it when no output path is given."""
        if output is None:
            sys.stdout.write(text)
            return
        write_atomic(output, text)
        self.record(output, inputs)

    def record(self, output, inputs):
        write_manifest(build_manifest(self.args.command, self.argv, self.settings,
                                      {**inputs, "config": self.args.config}, output))

    @staticmethod
    def _spans_by_article(annotations):
        grouped = defaultdict(list)
        for annotation in annotations:
            grouped[annotation.article_id].append(annotation.span)
        return grouped

    # subcommands

    def cmd_ingest(self, args):
        articles = self.load_articles(args.articles)
        annotations = None
        if args.labels:
            annotations = load_annotations(args.labels, articles=articles)
        print(format_stats(sequence_statistics(articles, annotations)))

        if annotations and annotations[0].technique is not None:
            histogram = class_histogram(annotations)
            print(format_stats({"pairs": len(annotations), "techniques": len(histogram)}, title="Techniques"))
            for name, count in histogram.items():
                print(f"  {name}: {count}")
            unknown = sorted(set(histogram) - set(OFFICIAL_TECHNIQUES) - {UNKNOWN_TECHNIQUE})
            if unknown:
                logger.warning("Techniques outside the shared-task inventory: %s", ", ".join(unknown))
        return 0

    def cmd_encode_tags(self, args):
        scheme = self.scheme()
        articles = self.load_articles(args.articles)
        spans = self._spans_by_article(load_annotations(args.labels, articles=articles))

        lines = []
        for article_id in sorted(articles, key=_article_order):
            for sentence in split_sentences(articles[article_id]):
                touching = [s for s in spans.get(article_id, []) if s.overlap(sentence.span)]
                lines.append(format_tags(encode(scheme, sentence.tokens, touching)) + "\n")
        self.emit("".join(lines), args.output, {"articles": args.articles, "labels": args.labels})
        return 0

    def cmd_decode_tags(self, args):
        scheme = self.scheme()
        articles = self.load_articles(args.articles)
        lines = read_text(args.tags).splitlines()

        predictions = []
        line_no = 0
        for article_id in sorted(articles, key=_article_order):
            for sentence in split_sentences(articles[article_id]):
                line_no += 1
                if line_no > len(lines):
                    raise TagSchemeError(f"missing tag line for sentence {line_no}", path=args.tags)
                try:
                    tags = parse_tags(lines[line_no - 1], scheme)
                    spans = decode(tags, sentence.tokens)
                except TagSchemeError as e:
                    raise TagSchemeError(e.message, path=args.tags, line=line_no) from None
                predictions.extend(SpanAnnotation(article_id, span) for span in spans)
        if len(lines) > line_no:
            raise TagSchemeError(f"{len(lines)} tag lines for {line_no} sentences", path=args.tags)

        text = write_annotations(predictions, AnnotationKind.SI)
        self.emit(text, args.output, {"articles": args.articles, "tags": args.tags})
        return 0

    def cmd_convert_tags(self, args):
        source = self.scheme(args.source_scheme)
        target = self.scheme(args.target_scheme)
        text = read_text(args.input) if args.input else sys.stdin.read()

        converted = []
        for line_no, line in enumerate(text.splitlines(), 1):
            try:
                converted.append(format_tags(convert(parse_tags(line, source), target)) + "\n")
            except TagSchemeError as e:
                raise TagSchemeError(e.message, path=args.input or "<stdin>", line=line_no) from None
        self.emit("".join(converted), args.output, {"input": args.input})
        return 0

    def cmd_score_si(self, args):
        score = score_si(load_annotations(args.pred), load_annotations(args.gold))
        print(format_si_summary(score))
        if args.output:
            self.emit(format_si_report(score), args.output, {"pred": args.pred, "gold": args.gold})
        return 0

    def cmd_score_tc(self, args):
        pred = load_annotations(args.pred, AnnotationKind.TC)
        gold = load_annotations(args.gold, AnnotationKind.TC)
        score = score_tc(pred, gold)
        print(format_tc_summary(score))
        if args.output:
            self.emit(format_tc_report(score), args.output, {"pred": args.pred, "gold": args.gold})
        return 0

    def cmd_extract_context(self, args):
        kind = self.context_kind()
        articles = self.load_articles(args.articles)
        annotations = load_annotations(args.labels, AnnotationKind.TC, articles=articles)
        pairs = build_tc_dataset(articles, annotations, kind, self.settings.context_cap,
                                 self.settings.cap_includes_fragment)
        self.emit(write_context_pairs(pairs), args.output, {"articles": args.articles, "labels": args.labels})
        return 0

    def cmd_train_si(self, args):
        scheme = self.scheme()
        train_config = self.train_config()
        articles = self.load_articles(args.articles)
        annotations = load_annotations(args.labels, articles=articles)
        spans = self._spans_by_article(annotations)
        train_ids, dev_ids = split_train_dev(articles, self.settings.split, self.settings.seed)

        examples = []
        for article_id in train_ids:
            for sentence in split_sentences(articles[article_id]):
                touching = [s for s in spans.get(article_id, []) if s.overlap(sentence.span)]
                tags = encode(scheme, sentence.tokens, touching)
                violations = validate(tags)
                if violations:
                    raise TagSchemeError(f"malformed {scheme.value} tags in article {article_id}: "
                                         f"{violations[0].message} at token {violations[0].index}")
                examples.append((sentence, tags))
        logger.info("Training on %d sentences from %d articles", len(examples), len(train_ids))

        encoder = HashingEncoder(train_config.dim)
        model = train_si(examples, scheme, train_config, encoder)
        save_model(model, args.output)
        self.record(args.output, {"articles": args.articles, "labels": args.labels})
        print(f"Saved {scheme.value} tagger to {args.output} (final loss {model.loss_history[-1]:.6f})")

        if dev_ids:
            pred = [SpanAnnotation(article_id, span)
                    for article_id in dev_ids
                    for span in predict_si(model, articles[article_id], encoder)]
            dev = set(dev_ids)
            gold = [a for a in annotations if a.article_id in dev]
            print(format_si_summary(score_si(pred, gold), title=f"Dev split ({len(dev_ids)} articles)"))
        return 0

    def cmd_predict_si(self, args):
        model = load_model(args.model)
        if not isinstance(model, TaggerModel):
            raise DataError("expected a tagger model", path=args.model)
        articles = self.load_articles(args.articles)
        encoder = HashingEncoder(model.config.dim)

        predictions = [SpanAnnotation(article_id, span)
                       for article_id in sorted(articles, key=_article_order)
                       for span in predict_si(model, articles[article_id], encoder)]
        text = write_annotations(predictions, AnnotationKind.SI)
        self.emit(text, args.output, {"articles": args.articles, "model": args.model})
        return 0

    def tc_training_pairs(self, args):
        """Labelled pairs for train-tc, from a pairs file or built from articles and labels."""
        if args.pairs:
            if args.articles or args.labels:
                raise UsageError("--pairs replaces --articles and --labels")
            pairs = parse_context_pairs(read_text(args.pairs), source=args.pairs)
            for line_no, pair in enumerate(pairs, 1):
                if pair.technique is None or pair.span is None:
                    raise DataError("training pairs need a span and a technique", path=args.pairs, line=line_no)
            return pairs
        if not (args.articles and args.labels):
            raise UsageError("train-tc needs --articles and --labels, or --pairs")
        kind = self.context_kind()
        articles = self.load_articles(args.articles)
        annotations = load_annotations(args.labels, AnnotationKind.TC, articles=articles)
        return build_tc_dataset(articles, annotations, kind, self.settings.context_cap,
                                self.settings.cap_includes_fragment)

    def cmd_train_tc(self, args):
        strategy = self.strategy()
        train_config = self.train_config()
        pairs = self.tc_training_pairs(args)
        if args.category is not None:
            categories = CategoryMap.for_techniques(OFFICIAL_TECHNIQUES)
            pairs = [p for p in pairs if categories.category_of(p.technique) == args.category]
            if not pairs:
                raise DataError(f"no training pairs for techniques of category {args.category}")
            logger.info("Training on %d pairs of category %d", len(pairs), args.category)
        inventory = build_label_inventory([SpanAnnotation(p.article_id, p.span, p.technique) for p in pairs])

        train_ids, dev_ids = split_train_dev({p.article_id for p in pairs},
                                             self.settings.split, self.settings.seed)
        train = set(train_ids)
        train_pairs = [p for p in pairs if p.article_id in train]
        dev_pairs = [p for p in pairs if p.article_id not in train]

        encoder = HashingEncoder(train_config.dim, args.vectors)
        model = train_tc(train_pairs, strategy, train_config, inventory, encoder, self.settings.length_feature)
        save_model(model, args.output)
        self.record(args.output, {"articles": args.articles, "labels": args.labels,
                                  "pairs": args.pairs, "vectors": args.vectors})
        print(f"Saved {strategy.describe()} classifier to {args.output} "
              f"(final loss {model.loss_history[-1]:.6f})")

        if dev_pairs:
            probabilities = predict_tc_batch(model, dev_pairs, encoder)
            pred = [SpanAnnotation(p.article_id, p.span, model.inventory.names[int(i)])
                    for p, i in zip(dev_pairs, np.argmax(probabilities, axis=1))]
            gold = [SpanAnnotation(p.article_id, p.span, p.technique) for p in dev_pairs]
            print(format_tc_summary(score_tc(pred, gold), title=f"Dev split ({len(dev_ids)} articles)"))
        return 0

    def cmd_predict_tc(self, args):
        model = load_model(args.model)
        if not isinstance(model, ClassifierModel):
            raise DataError("expected a classifier model", path=args.model)
        articles = self.load_articles(args.articles)
        fragments = load_annotations(args.labels, articles=articles)
        pairs = build_tc_dataset(articles, fragments, self.context_kind(), self.settings.context_cap,
                                 self.settings.cap_includes_fragment)

        encoder = HashingEncoder(model.config.dim, args.vectors)
        probabilities = predict_tc_batch(model, pairs, encoder)
        predictions = [SpanAnnotation(p.article_id, p.span, model.inventory.names[int(i)])
                       for p, i in zip(pairs, np.argmax(probabilities, axis=1))]
        text = write_annotations(predictions, AnnotationKind.TC)
        self.emit(text, args.output, {"articles": args.articles, "labels": args.labels,
                                      "model": args.model, "vectors": args.vectors})
        return 0

    def cmd_stats(self, args):
        s = self.settings
        unit = self._parse_choice(lambda v: LengthUnit[v.upper()], s.length_unit, "length unit")
        grouping = self._parse_choice(lambda v: Grouping[v.upper()], s.grouping, "grouping")
        articles = self.load_articles(args.articles) if args.articles else None
        annotations = load_annotations(args.labels, articles=articles)
        inputs = {"labels": args.labels, "articles": args.articles, "pred": args.pred}

        if annotations and annotations[0].technique is not None:
            histogram = class_histogram(annotations)
            path = os.path.join(args.output_dir, "class_histogram.csv")
            self.emit(class_histogram_to_csv(histogram), path, inputs)
            print(format_stats(histogram, title="Instances per technique"))

        histograms = span_length_distribution(annotations, unit, grouping, s.bin_width, articles)
        path = os.path.join(args.output_dir, "span_lengths.csv")
        self.emit(histograms_to_csv(histograms), path, inputs)
        print(format_stats({group: h.mean for group, h in histograms.items()},
                           title=f"Mean span length ({unit.value.lower()})"))

        if args.pred:
            comparison = compare_span_lengths(load_annotations(args.pred), annotations)
            print(format_stats({k: v for k, v in comparison.items() if v is not None},
                               title="Average span length"))
        return 0

    def cmd_replay(self, args):
        manifest = load_manifest(args.manifest)
        changed = changed_inputs(manifest)
        if changed:
            raise DataError(f"inputs changed since the recorded run: {', '.join(changed)}", path=args.manifest)

        argv = list(manifest["argv"])
        if args.output:
            flag = next((f for f in ("--output", "--output-dir") if f in argv), None)
            if flag is None:
                raise UsageError(f"recorded {manifest['command']} run has no output to redirect")
            argv[argv.index(flag) + 1] = args.output
        argv += ["--seed", str(manifest["seed"])]
        logger.info("Replaying %s from %s", manifest["command"], args.manifest)
        return SpanTagApp().run(argv)

    # entry

    def run(self, argv):
        """
        Parse arguments and dispatch to a subcommand.

        Args:
            argv (list): Arguments without the program name

        Returns:
            int: Exit code of the subcommand
        """
        self.argv = list(argv)
        self.args = self.parser.parse_args(self.argv)
        logging.basicConfig(level=self.args.log_level, stream=sys.stderr,
                            format="%(levelname)s %(name)s: %(message)s")
        self.show_progress = config.SHOW_PROGRESS and not self.args.quiet
        self.settings = self.resolve_config(self.args)
        handler = getattr(self, "cmd_" + self.args.command.replace("-", "_"))
        return handler(self.args)


def run(argv=None):
    """
    Run the command line and map failures to exit codes.

    Returns:
        int: 0 on success, 1 on usage errors, 2 on data errors
    """
    argv = sys.argv[1:] if argv is None else argv
    try:
        return SpanTagApp().run(argv)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return 1
    except DataError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"error: {e.filename}: {e.strerror}", file=sys.stderr)
        return 2
    except SystemExit as e:
        # --help exits through argparse
        return e.code if isinstance(e.code, int) else 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
