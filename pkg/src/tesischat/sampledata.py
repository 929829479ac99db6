"""Synthetic corpus fixtures and a fully scripted demo flow.

Everything here is deterministic so the whole pipeline can run and be
tested without a real model: a small curated corpus whose aggregations
have known answers, a large generated corpus for round-trip checks, a
validation set of question/reference/candidate triples, and the script
for the canned count-question conversation.
"""

from __future__ import annotations

import random
from pathlib import Path

from .backend import BackendConfig, script_entries_from_config, scripted_backend
from .ingest import ThesisRecord, build_database
from .metrics import EvalCase

CARRERA = "Carrera de Ingeniería en Geología"

COUNT_QUESTION = "¿Cuántas tesis se realizaron en 2022?"
COUNT_ANSWER = (
    "En el año 2022, se realizaron 10 tesis en la carrera de Ingeniería en Geología "
    "de la FIGEMPA."
)

TOP_TUTOR_2022 = "Troncoso Salgado Liliana Paulina"

ARMADILLO_TITLE = (
    "Análisis sedimentológico para la generación del modelo estético de la Arenia C "
    "inferior del campo Armadillo"
)

DRAGO_TITLE = (
    "Determinación del potencial de acumulación hidrocarburífero de las calizas "
    "“A” y “M2” de la formación Napo, campo Drago"
)


def _record(
    id: str,
    titulo: str,
    autor: str,
    tutor: str,
    tematica: str,
    year_approval: int | None,
    month_approval: int | None = None,
    number_pages: int | None = 120,
    **overrides: object,
) -> ThesisRecord:
    values: dict[str, object] = {
        "id": id,
        "titulo": titulo,
        "autor": autor,
        "tutor": tutor,
        "tematica": tematica,
        "graduate_title": "Ingeniería en Geología",
        "thesis_level": "Pregrado",
        "carrera": CARRERA,
        "year_approval": year_approval,
        "month_approval": month_approval,
        "number_pages": number_pages,
        "resumen": f"Estudio geológico sobre {tematica.lower()} desarrollado en Ecuador.",
        "keywords": f"{tematica}, Geología, Ecuador",
        "citation": f"{autor.split()[0]}, {autor.split()[1][0]}. ({year_approval or 's.f.'}). {titulo}.",
        "location": "Biblioteca General - FIGEMPA",
        "url": f"https://repositorio.example.edu.ec/handle/{id}",
    }
    values.update(overrides)
    return ThesisRecord(**values)  # type: ignore[arg-type]


def fixture_records() -> list[ThesisRecord]:
    """Curated corpus with known aggregations.

    Exactly 10 theses approved in 2022; 6 of those share the same tutor,
    so the 2022 tutor ranking has a unique winner with count 6. One row
    matches the Armadillo title exactly and one holds the Drago thesis.
    """
    troncoso = [
        ("Caracterización hidrogeológica de la cuenca del río Pita", "Hidrogeología"),
        ("Análisis de estabilidad de taludes en la vía Alóag - Santo Domingo", "Geotecnia"),
        ("Evaluación de amenazas por movimientos en masa en el cantón Baños", "Riesgos geológicos"),
        ("Estudio geológico estructural del sinclinal de Tena", "Geología estructural"),
        ("Microzonificación sísmica del valle de Tumbaco", "Geofísica"),
        ("Cartografía geológica de la hoja Machachi escala 1:50000", "Cartografía geológica"),
    ]
    volcanismo = [
        ("Estudio de los depósitos piroclásticos del volcán Cotopaxi", "Bustillos Arequipa Jorge Eduardo"),
        ("Análisis de la caída de ceniza del volcán Sangay y sus efectos", "Bustillos Arequipa Jorge Eduardo"),
        ("Evolución morfológica del volcán Reventador en la última década", "Ruiz Paspuel Andrés Gorki"),
        ("Petrografía de las lavas históricas del volcán Tungurahua", "Ruiz Paspuel Andrés Gorki"),
    ]
    autores = [
        "Paredes Montúfar Carla Estefanía",
        "Guamán Tituaña Luis Alberto",
        "Salazar Obando María José",
        "Chicaiza Villamarín Pedro Andrés",
        "Moya Espinosa Daniela Fernanda",
        "Torres Iza Kevin Sebastián",
        "Cevallos Ortiz Gabriela Alejandra",
        "Quinatoa Lema Diego Armando",
        "Velasco Jácome Ana Cristina",
        "Herrera Pantoja Marco Vinicio",
    ]

    records = [
        _record(
            id=f"t22-{index + 1:02d}",
            titulo=title,
            autor=autores[index],
            tutor=TOP_TUTOR_2022,
            tematica=topic,
            year_approval=2022,
            month_approval=(index % 12) + 1,
        )
        for index, (title, topic) in enumerate(troncoso)
    ]
    records += [
        _record(
            id=f"t22-{index + 7:02d}",
            titulo=title,
            autor=autores[index + 6],
            tutor=tutor,
            tematica="Volcanismo",
            year_approval=2022,
        )
        for index, (title, tutor) in enumerate(volcanismo)
    ]

    records.append(
        _record(
            id="arm-01",
            titulo=ARMADILLO_TITLE,
            autor="Naranjo Ríos Sofía Carolina",
            tutor="Pilatasig Chicaiza Luis Fernando",
            tematica="Sedimentología",
            year_approval=2021,
            month_approval=6,
            number_pages=98,
        )
    )
    records.append(
        _record(
            id="drg-01",
            titulo=DRAGO_TITLE,
            autor="Carrillo Guerra Janina Lisbeth",
            tutor="Rivadeneira Vallejo Marco Patricio",
            tematica="Geología del petróleo",
            year_approval=2023,
            month_approval=3,
            number_pages=145,
        )
    )
    records.append(
        ThesisRecord(
            id="288b197f-46d3-4483-8698-9fb44c7239ab",
            titulo=(
                "Sedimentología y estratigrafía secuencial de la Formación Hollín en el "
                "campo Palo Azul - Bloque 18 de la Cuenca Oriente"
            ),
            autor="Yépez Ruiz Andrea Jadira",
            tutor="Zura Quilumbango Cristian Bayardo",
            tematica="Geofísica petrolera",
            graduate_title="Ingeniería en Geología",
            thesis_level="Pregrado",
            carrera=CARRERA,
            year_approval=2020,
            month_approval=None,
            number_pages=132,
            resumen=(
                "La presente investigación detalla la sedimentología y estratigrafía "
                "secuencial de la Formación Hollín en el campo Palo Azul."
            ),
            keywords="Hollín, Ambientes sedimentarios, Cortejos sedimentarios, Litofacies",
            citation="Yépez Ruiz, A. (2020). Sedimentología y estratigrafía secuencial de la Formación Hollín.",
            location="Biblioteca General - FIGEMPA",
            url="https://www.dspace.uce.edu.ec/handle/25000/22130",
        )
    )
    records.append(
        _record(
            id="ext-01",
            titulo="Evaluación geomecánica del macizo rocoso del túnel de carga del proyecto Coca Codo",
            autor="Mendoza Zambrano Jorge Luis",
            tutor="Pilatasig Chicaiza Luis Fernando",
            tematica="Geotecnia",
            year_approval=2023,
            month_approval=11,
            number_pages=110,
        )
    )
    records.append(
        _record(
            id="ext-02",
            titulo="Estudio hidrogeoquímico de las aguas termales de Papallacta",
            autor="Rosero Cando Verónica Elizabeth",
            tutor=TOP_TUTOR_2022,
            tematica="Hidrogeología",
            year_approval=2021,
            month_approval=9,
            number_pages=87,
        )
    )
    return records


_FIRST = ["Juan", "María", "Pedro", "Lucía", "Andrés", "Sofía", "Diego", "Camila", "José", "Paula"]
_LAST = ["Pérez", "Gómez", "Vásquez", "Núñez", "Cárdenas", "Jaramillo", "Zurita", "Paredes", "León", "Ortiz"]
_TOPICS = [
    "Volcanismo", "Hidrogeología", "Geotecnia", "Sedimentología", "Geofísica",
    "Riesgos geológicos", "Geología estructural", "Mineralogía", "Paleontología",
    "Geología del petróleo",
]


def sample_records(count: int = 244, seed: int = 7) -> list[ThesisRecord]:
    """Deterministic bulk corpus for load and round-trip checks.

    Covers the awkward value shapes on purpose: "-" sentinels in text
    columns, null months and pages, diacritics, embedded commas.
    """
    rng = random.Random(seed)
    records = []
    for index in range(count):
        autor = f"{rng.choice(_LAST)} {rng.choice(_LAST)} {rng.choice(_FIRST)} {rng.choice(_FIRST)}"
        tutor = f"{rng.choice(_LAST)} {rng.choice(_LAST)} {rng.choice(_FIRST)} {rng.choice(_FIRST)}"
        topic = rng.choice(_TOPICS)
        year = rng.choice([None] + list(range(2010, 2025)))
        records.append(
            _record(
                id=f"syn-{index:04d}-{rng.randrange(16**6):06x}",
                titulo=f"Estudio {index} sobre {topic.lower()} en la zona {rng.choice(_LAST)}",
                autor=autor,
                tutor=tutor,
                tematica=topic,
                year_approval=year,
                month_approval=rng.choice([None, None, *range(1, 13)]),
                number_pages=rng.choice([None, *range(40, 320)]),
                resumen=rng.choice(
                    [
                        f"Resumen técnico número {index}, con énfasis en {topic.lower()}.",
                        "-",
                        f"Investigación de campo y laboratorio: {topic.lower()}, región andina.",
                    ]
                ),
                keywords=rng.choice([f"{topic}, Ecuador, campo", "-"]),
                location=rng.choice(["Biblioteca General - FIGEMPA", "-"]),
                url=rng.choice([f"https://repositorio.example.edu.ec/handle/syn-{index}", "-"]),
            )
        )
    return records


def build_fixture_db(path: str | Path):
    """Build the curated corpus database at `path` and return the ingest report."""
    return build_database(fixture_records(), path)


def validation_cases() -> list[EvalCase]:
    """Question/reference/candidate triples for the adapted scorer.

    References are what the database itself returns; candidates are
    phrased the way a conversational model would put it, imperfections
    included.
    """
    return [
        EvalCase(
            id="directivos-tutor-2022",
            question="¿Tutor con más tesis en el año 2022?",
            reference="Troncoso Salgado Liliana Paulina | Total tesis 6",
            candidate=(
                "Según los datos de las tesis en Geología, el tutor con más tesis aprobadas "
                "en el año 2022 es Troncoso Salgado Liliana Paulina."
            ),
        ),
        EvalCase(
            id="estudiantes-tutor-volcanismo",
            question="¿Recomienda un tutor para tesis con temática volcanismo?",
            reference="Bustillos Arequipa Jorge Eduardo\nRuiz Paspuel Andrés Gorki",
            candidate=(
                "Si estas buscando un tutor para realizar una tesis relacionada con el tema "
                "de volcanismo, la base de datos sugiere varios nombres que podrían ser útiles. "
                "Los resultados obtenidos, se recomienda a Andrés Gorki Ruiz Pasquel como "
                "posiblle tutor y a Jorge Eduardo Bustillos Arequipa como otra opción."
            ),
        ),
        EvalCase(
            id="administrativos-titulo-existe",
            question=f"¿Existe alguna tesis con el título '{ARMADILLO_TITLE}'?",
            reference="1",
            candidate="La consulta ha encontrado un resultado con el título especificado.",
        ),
        EvalCase(
            id="docentes-titulo-autor",
            question="¿Proporcióname el título de la tesis de Carrillo Guerra Janina Lisbeth?",
            reference=DRAGO_TITLE,
            candidate=(
                "La tesis de Janina Lisbeth Carrillo Guerra es titula: \"Determinación del "
                "potencial de acumulación hidrocarburífero de las calizas 'Y' y 'M2' de la "
                "formación Napo, campo Drago\". Espero que esta información sea útil para ti "
                "en tu investigación sobre Geología. ¿Necesitas algo más?"
            ),
        ),
    ]


def count_script_entries() -> list[dict[str, str]]:
    """Config-file form of the canned count-question conversation.

    Each agent round keys off text that only appears once the previous
    observation has been folded into the prompt, so the script also
    verifies that history accumulates.
    """
    return [
        {
            "contains": f"Question: {COUNT_QUESTION}",
            "response": 'Action: sql_db_list_tables\nAction Input: ""\nObservation: pending',
        },
        {
            "contains": "Observation: tesis",
            "response": (
                "Thought: The tesis table is available. I should inspect its schema.\n"
                "Action: sql_db_schema\nAction Input: tesis"
            ),
        },
        {
            "contains": "year_approval",
            "response": (
                "Thought: I can count the theses approved in 2022.\n"
                "Action: sql_db_query\n"
                "Action Input: SELECT COUNT(*) FROM tesis WHERE year_approval = 2022;"
            ),
        },
        {
            "contains": "Observation: 10",
            "response": "Thought: I now know the final answer\nFinal Answer: 10",
        },
        {
            "contains": "Dada la siguiente pregunta",
            "response": COUNT_ANSWER,
        },
    ]


def count_backend() -> BackendConfig:
    """Fresh scripted backend for one run of the canned count conversation."""
    return scripted_backend(script_entries_from_config(count_script_entries()))
