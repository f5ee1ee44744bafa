#!/usr/bin/env python3
"""Writes the committed test fixtures: a ~50-doc corpus, a 5-turn topic,
qrels, and the fixture pipeline config. Run from the repo root:

    python3 scripts/make_fixtures.py
"""
import json
from pathlib import Path

FIXTURES = Path(__file__).resolve().parent.parent / "tests" / "fixtures"

# A small breast-cancer themed collection plus distractors. Several distractor
# docs deliberately reuse generic words (deadly, spread, common, types) so the
# anaphoric turns are ambiguous without expansion.
CORPUS = [
    ("d001", "The most common types of breast cancer are ductal carcinoma and lobular carcinoma. Invasive ductal carcinoma accounts for the majority of diagnosed breast cancer cases."),
    ("d002", "Lobular carcinoma in situ is a condition in which abnormal cells form in the lobules of the breast. Lobular carcinoma in situ is rarely deadly on its own."),
    ("d003", "Ductal carcinoma in situ means the abnormal cells are confined to the milk ducts of the breast and have not spread into surrounding breast tissue."),
    ("d004", "A breast biopsy removes a small sample of breast tissue so a pathologist can check the cells for cancer. A core needle biopsy is the most common biopsy type."),
    ("d005", "After a breast biopsy confirms cancer, doctors grade the tumor cells to estimate how quickly the cancer may grow and spread to other tissue."),
    ("d006", "Invasive lobular carcinoma begins in the lobules and can spread to nearby lymph nodes and distant parts of the body such as bone and liver."),
    ("d007", "Metastatic breast cancer occurs when cancer cells spread from the breast to distant organs. Once cancer has spread widely it becomes much harder to treat."),
    ("d008", "Survival rates for breast cancer depend on the stage at diagnosis. Localized breast cancer has a five year relative survival rate near 99 percent."),
    ("d009", "How deadly a cancer is depends on its type and stage. Lobular carcinoma in situ is not considered deadly, while inflammatory breast cancer is aggressive."),
    ("d010", "Common treatments for breast cancer include surgery, radiation therapy, chemotherapy, hormone therapy, and targeted drug therapy."),
    ("d011", "A lumpectomy removes the tumor and a margin of surrounding breast tissue, while a mastectomy removes the entire breast. Both are common surgical treatments."),
    ("d012", "Chemotherapy for breast cancer uses drugs to destroy fast growing cancer cells and is often given before surgery to shrink a tumor."),
    ("d013", "Hormone receptor positive breast cancer cells grow in response to estrogen. Hormone therapy blocks estrogen and lowers the chance the cancer returns."),
    ("d014", "Radiation therapy after a lumpectomy lowers the risk that breast cancer will return in the treated breast."),
    ("d015", "Screening mammograms can find breast cancer early, before symptoms appear, when treatments are most likely to succeed."),
    ("d016", "Inflammatory breast cancer is a rare and aggressive form in which cancer cells block lymph vessels in the skin of the breast."),
    ("d017", "Triple negative breast cancer lacks estrogen receptors, progesterone receptors, and HER2 protein, which limits targeted treatment options."),
    ("d018", "Breast cancer staging runs from stage 0, such as carcinoma in situ, to stage 4, which means the cancer has spread to distant organs."),
    ("d019", "Risk factors for breast cancer include age, family history, inherited BRCA1 and BRCA2 mutations, and dense breast tissue."),
    ("d020", "Lymph node involvement is a key sign of whether breast cancer has begun to spread beyond the original tumor site."),
    ("d021", "The pathology report from a biopsy describes the tumor grade, hormone receptor status, and whether the margins are clear of cancer cells."),
    ("d022", "Male breast cancer is rare but occurs; most cases are ductal carcinoma found at a later stage than in women."),
    ("d023", "Clinical trials in 2019 and 2020 tested new targeted therapies for metastatic lobular carcinoma with promising response rates."),
    ("d024", "Paget disease of the breast is a rare cancer involving the skin of the nipple and is often associated with ductal carcinoma in situ."),
    ("d025", "Oncologists use the term in situ to describe cancer cells that remain in the place where they first formed and have not spread."),
    ("d026", "The weather forecast warns of a deadly heat wave this weekend, with temperatures spreading across the central plains."),
    ("d027", "Common types of house spiders are harmless, though the brown recluse has a deadly reputation that is largely exaggerated."),
    ("d028", "The flu can spread quickly through schools and offices; seasonal vaccination remains the most common prevention measure."),
    ("d029", "Wildfires spread rapidly in dry conditions and can become deadly when driven by strong winds through populated canyons."),
    ("d030", "The museum exhibit surveys common pottery types of the early bronze age, including beakers and storage jars."),
    ("d031", "A mechanic explains the most common types of engine oil and how often a family sedan needs an oil change."),
    ("d032", "The recipe book lists common types of pasta such as penne, rigatoni, and fusilli, with sauces for each shape."),
    ("d033", "Volcanic eruptions can be deadly when pyroclastic flows spread down the slopes at hundreds of kilometers per hour."),
    ("d034", "The documentary follows deadly venomous snakes of the outback and the antivenom programs that treat bites."),
    ("d035", "City planners mapped how traffic congestion spreads from the harbor bridge during the morning commute."),
    ("d036", "Astronomers cataloged common types of variable stars, from cepheids to long period red giants."),
    ("d037", "The gardening guide covers common treatments for powdery mildew, including sulfur sprays and pruning for airflow."),
    ("d038", "Coaches reviewed common types of defensive formations used in the league during the 2020 and 2021 seasons."),
    ("d039", "The aquarium handbook describes common freshwater fish types and the water treatments needed after transport."),
    ("d040", "Folk remedies were once common treatments for headaches, though few survived controlled clinical scrutiny."),
    ("d041", "The hiking guide rates the deadliness of exposed alpine routes and lists rescue statistics from 2018 2019 and 2020."),
    ("d042", "Economists tracked how inflation spreads across sectors, from energy prices to groceries and rents."),
    ("d043", "The chess manual catalogs common opening types, from open games to closed positional systems."),
    ("d044", "Marine biologists studied how coral bleaching spreads across reefs when sea temperatures stay high."),
    ("d045", "The software handbook lists common types of database indexes and when a query planner will use them."),
    ("d046", "Epidemiologists modeled how rumors spread on social networks using the same equations as disease spread."),
    ("d047", "The field guide describes common hawk types of north america and how to tell them apart in flight."),
    ("d048", "A carpenter compares common types of wood joints, from dovetails to mortise and tenon."),
    ("d049", "The cookbook chapter on preserving covers common treatments for pickling cucumbers and fermenting cabbage."),
    ("d050", "Meteorologists explained how a deadly derecho spreads straight line winds across hundreds of miles."),
]

# Five turns modeled on a conversational cancer session (anaphora from turn 2 on).
TOPIC = {
    "topic_id": "106",
    "turns": [
        {"turn_id": "106_1", "raw_utterance": "I just had a breast biopsy for cancer. What are the most common types?"},
        {"turn_id": "106_2", "raw_utterance": "Once it breaks out, how likely is it to spread?"},
        {"turn_id": "106_3", "raw_utterance": "How deadly is it?"},
        {"turn_id": "106_4", "raw_utterance": "What? No, I want to know about the deadliness of lobular carcinoma in situ."},
        {"turn_id": "106_5", "raw_utterance": "Wow, that's better than I thought. What are common treatments?"},
    ],
}

# Graded judgments per turn (passage ids use the doc#chunk convention; the
# fixture chunk window keeps every doc in a single chunk).
QRELS = {
    "106_1": {"d001": 3, "d004": 2, "d003": 1, "d017": 1, "d016": 1},
    "106_2": {"d007": 3, "d006": 2, "d020": 2, "d018": 1, "d005": 1},
    "106_3": {"d009": 3, "d008": 2, "d016": 1, "d002": 1},
    "106_4": {"d002": 3, "d009": 2, "d006": 1, "d025": 1},
    "106_5": {"d010": 3, "d011": 2, "d012": 2, "d013": 1, "d014": 1},
}

CONFIG = {
    "bm25": {"k1": 1.2, "b": 0.75},
    "hqe": {"q_s": 2.0, "q_t": 3.0, "theta": 5.0},
    "pqe": {"top_docs": 5, "top_tokens": 3, "df_min": 0.001, "df_max": 0.2},
    "first_stage_depth": 20,
    "rerank_depth": 50,
    "output_k": 50,
    "chunk_window": 64,
    "chunk_stride": 32,
    "rewriter": "passthrough",
    "reranker": "lexical",
    "run_tag": "fixture",
}


def main():
    FIXTURES.mkdir(parents=True, exist_ok=True)
    with open(FIXTURES / "corpus.jsonl", "w", encoding="utf-8") as fh:
        for doc_id, text in CORPUS:
            fh.write(json.dumps({"id": doc_id, "contents": text}) + "\n")
    with open(FIXTURES / "topics.json", "w", encoding="utf-8") as fh:
        json.dump([TOPIC], fh, indent=2)
    with open(FIXTURES / "qrels.txt", "w", encoding="utf-8") as fh:
        for qid, judged in QRELS.items():
            for doc_id, grade in judged.items():
                fh.write(f"{qid} 0 {doc_id}#0 {grade}\n")
    with open(FIXTURES / "config.json", "w", encoding="utf-8") as fh:
        json.dump(CONFIG, fh, indent=2)
    print(f"wrote fixtures to {FIXTURES}")


if __name__ == "__main__":
    main()
