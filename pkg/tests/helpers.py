"""Shared fixture builders for the test suite."""

import json

from faqrank.corpus import FaqItem, Query


def write_jsonl(path, records):
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(rec) + "\n")
    return path


def faq_record(item_id, question, answer, **overrides):
    rec = {
        "id": item_id,
        "question": question,
        "answer": answer,
        "source": "unit-test",
        "language": "en",
        "form": "question",
    }
    rec.update(overrides)
    return rec


def make_item(item_id, question, answer, form="question"):
    return FaqItem(id=item_id, question=question, answer=answer,
                   source="unit-test", language="en", form=form)


def make_query(query_id, text, form="query_string"):
    return Query(id=query_id, text=text, form=form)
