// Copyright 2026 The LSK Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "lsk/prompts.h"

#include <algorithm>
#include <nlohmann/json.hpp>

#include "lsk/error.h"
#include "lsk/io.h"

namespace lsk {
namespace {

using nlohmann::json;

// Order of the candidate list in the expert-language selection prompt.
constexpr std::array<Language, kLanguageCount> kSelectionListOrder = {
    Language::kZh, Language::kEn, Language::kFr, Language::kEs,
    Language::kPt, Language::kDe, Language::kIt, Language::kRu,
    Language::kJa, Language::kKo, Language::kVi, Language::kTh,
    Language::kAr, Language::kHi, Language::kTr, Language::kBn,
};

struct BuiltInEntry {
  Language lang;
  ReasoningTemplate tmpl;
};

const std::vector<BuiltInEntry>& BuiltInEntries() {
  static const std::vector<BuiltInEntry> kEntries = {
      {Language::kEn,
       {"Question:", "Answer choices:",
        "Think about it in English, and then select one of the answer "
        "choices. Fill in the JSON below.",
        "<your reasoning steps in English>", "<output answer here>"}},
      {Language::kAr,
       {"السؤال:", "خيارات الإجابة:",
        "فكّر في الأمر باللغة العربية، ثم اختر أحد خيارات الإجابة. املأ "
        "JSON أدناه.",
        "<خطوات تفكيرك باللغة العربية>", "<اكتب الإجابة هنا>"}},
      {Language::kBn,
       {"প্রশ্ন:", "উত্তরের বিকল্পসমূহ:",
        "বাংলায় এটি নিয়ে চিন্তা করুন, তারপর উত্তরের বিকল্পগুলির মধ্যে একটি "
        "নির্বাচন করুন। নিচের JSON পূরণ করুন।",
        "<বাংলায় আপনার যুক্তির ধাপগুলি>", "<এখানে উত্তর লিখুন>"}},
      {Language::kZh,
       {"问题：", "答案选项：",
        "请用中文思考，然后选择一个答案选项。填写下面的 JSON。",
        "<你的中文推理步骤>", "<在此输出答案>"}},
      {Language::kFr,
       {"Question :", "Choix de réponses :",
        "Réfléchissez-y en français, puis sélectionnez l'un des choix de "
        "réponse. Remplissez le JSON ci-dessous.",
        "<vos étapes de raisonnement en français>",
        "<indiquez la réponse ici>"}},
      {Language::kDe,
       {"Frage:", "Antwortmöglichkeiten:",
        "Denken Sie auf Deutsch darüber nach und wählen Sie dann eine der "
        "Antwortmöglichkeiten aus. Füllen Sie das folgende JSON aus.",
        "<Ihre Denkschritte auf Deutsch>", "<Antwort hier ausgeben>"}},
      {Language::kHi,
       {"प्रश्न:", "उत्तर विकल्प:",
        "इसके बारे में हिंदी में सोचें, और फिर उत्तर विकल्पों में से एक चुनें। "
        "नीचे दिया गया JSON भरें।",
        "<हिंदी में आपके तर्क के चरण>", "<यहाँ उत्तर लिखें>"}},
      {Language::kIt,
       {"Domanda:", "Scelte di risposta:",
        "Pensaci in italiano, quindi seleziona una delle scelte di risposta. "
        "Compila il JSON qui sotto.",
        "<i tuoi passaggi di ragionamento in italiano>",
        "<inserisci qui la risposta>"}},
      {Language::kJa,
       {"質問：", "回答の選択肢：",
        "日本語で考えてから、回答の選択肢から1つを選んでください。以下の"
        "JSONに記入してください。",
        "<日本語での推論ステップ>", "<ここに回答を出力>"}},
      {Language::kKo,
       {"질문:", "답변 선택지:",
        "한국어로 생각한 다음 답변 선택지 중 하나를 선택하세요. 아래 JSON을 "
        "채우세요.",
        "<한국어로 된 추론 단계>", "<여기에 답변 출력>"}},
      {Language::kPt,
       {"Pergunta:", "Opções de resposta:",
        "Pense nisso em português e depois selecione uma das opções de "
        "resposta. Preencha o JSON abaixo.",
        "<seus passos de raciocínio em português>",
        "<coloque a resposta aqui>"}},
      {Language::kRu,
       {"Вопрос:", "Варианты ответа:",
        "Подумайте об этом на русском языке, а затем выберите один из "
        "вариантов ответа. Заполните JSON ниже.",
        "<ваши шаги рассуждения на русском языке>", "<укажите ответ здесь>"}},
      {Language::kEs,
       {"Pregunta:", "Opciones de respuesta:",
        "Piénsalo en español y luego selecciona una de las opciones de "
        "respuesta. Completa el JSON a continuación.",
        "<tus pasos de razonamiento en español>",
        "<escribe la respuesta aquí>"}},
      {Language::kTh,
       {"คำถาม:", "ตัวเลือกคำตอบ:",
        "คิดเกี่ยวกับเรื่องนี้เป็นภาษาไทย แล้วเลือกหนึ่งในตัวเลือกคำตอบ "
        "กรอก JSON ด้านล่าง",
        "<ขั้นตอนการให้เหตุผลของคุณเป็นภาษาไทย>", "<ใส่คำตอบที่นี่>"}},
      {Language::kTr,
       {"Soru:", "Cevap seçenekleri:",
        "Türkçe olarak düşünün ve ardından cevap seçeneklerinden birini "
        "seçin. Aşağıdaki JSON'u doldurun.",
        "<Türkçe akıl yürütme adımlarınız>", "<çıktı cevabı buraya>"}},
      {Language::kVi,
       {"Câu hỏi:", "Các lựa chọn trả lời:",
        "Hãy suy nghĩ về điều này bằng tiếng Việt, sau đó chọn một trong các "
        "lựa chọn trả lời. Điền vào JSON bên dưới.",
        "<các bước lập luận của bạn bằng tiếng Việt>",
        "<ghi câu trả lời ở đây>"}},
  };
  return kEntries;
}

json TemplateToJson(const ReasoningTemplate& t) {
  return json{{"question_label", t.question_label},
              {"choices_label", t.choices_label},
              {"instruction", t.instruction},
              {"reasoning_placeholder", t.reasoning_placeholder},
              {"answer_placeholder", t.answer_placeholder}};
}

ReasoningTemplate TemplateFromJson(const json& j, const std::string& origin) {
  ReasoningTemplate t;
  auto field = [&](const char* name) {
    auto it = j.find(name);
    if (it == j.end() || !it->is_string()) {
      throw Error(ErrorKind::kParse,
                  origin + ": template field '" + name + "' missing");
    }
    return it->get<std::string>();
  };
  t.question_label = field("question_label");
  t.choices_label = field("choices_label");
  t.instruction = field("instruction");
  t.reasoning_placeholder = field("reasoning_placeholder");
  t.answer_placeholder = field("answer_placeholder");
  return t;
}

bool IsBlank(const std::string& s) {
  return s.find_first_not_of(" \t\r\n") == std::string::npos;
}

}  // namespace

TemplateSet TemplateSet::BuiltIn() {
  TemplateSet set;
  for (const auto& entry : BuiltInEntries()) set.Set(entry.lang, entry.tmpl);
  return set;
}

void TemplateSet::Set(Language lang, ReasoningTemplate tmpl) {
  templates_[static_cast<std::size_t>(lang)] = std::move(tmpl);
}

const ReasoningTemplate* TemplateSet::Find(Language lang) const {
  const auto& slot = templates_[static_cast<std::size_t>(lang)];
  return slot ? &*slot : nullptr;
}

void TemplateSet::LoadDirectory(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw Error(ErrorKind::kNotFound,
                "template directory not found: " + dir.string());
  }
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() != ".json") continue;
    auto lang = TryParseLanguage(entry.path().stem().string());
    if (!lang) continue;
    json j = json::parse(ReadFile(entry.path()), nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
      throw Error(ErrorKind::kParse, entry.path().string() + ": not a JSON object");
    }
    Set(*lang, TemplateFromJson(j, entry.path().string()));
  }
}

void TemplateSet::WriteDirectory(const std::filesystem::path& dir) const {
  for (Language lang : AllLanguages()) {
    if (const auto* t = Find(lang)) {
      WriteFileAtomic(dir / (std::string(Code(lang)) + ".json"),
                      TemplateToJson(*t).dump(2) + "\n");
    }
  }
}

std::string TemplateSet::Hash() const {
  json all = json::object();
  for (Language lang : AllLanguages()) {
    if (const auto* t = Find(lang)) all[std::string(Code(lang))] = TemplateToJson(*t);
  }
  return Sha256Hex(all.dump());
}

std::string ReasoningKey(Language lang) {
  return "reasoning_in_" + std::string(EnglishName(lang));
}

std::string TranslationKey(Language target) {
  return std::string(EnglishName(target)) + "_translation";
}

PromptText BuildReasoningPrompt(const McqItem& item, Language lang,
                                const TemplateSet& templates) {
  const ReasoningTemplate* t = templates.Find(lang);
  if (t == nullptr) {
    throw Error(ErrorKind::kNotFound,
                "no reasoning template for language '" + std::string(Code(lang)) + "'");
  }
  std::string body;
  body += t->question_label + " " + item.question + "\n";
  body += t->choices_label + "\n";
  for (const auto& c : item.choices) {
    body += c.label;
    body += ". " + c.text + "\n";
  }
  body += "\n";
  body += t->instruction + "\n";
  body += "{\n";
  body += "  \"" + ReasoningKey(lang) + "\": \"" + t->reasoning_placeholder + "\",\n";
  body += "  \"final_answer\": \"" + t->answer_placeholder + "\"\n";
  body += "}\n";
  return PromptText{std::move(body), {ReasoningKey(lang), "final_answer"}, lang};
}

PromptText BuildSelectionPrompt(const McqItem& item,
                                const std::vector<Language>& languages) {
  if (languages.empty()) {
    throw Error(ErrorKind::kInvalidArgument,
                "selection prompt needs at least one candidate language");
  }
  std::string list;
  for (Language lang : kSelectionListOrder) {
    if (std::find(languages.begin(), languages.end(), lang) == languages.end()) {
      continue;
    }
    if (!list.empty()) list += ", ";
    list += EnglishName(lang);
  }
  std::string body =
      "An expert language is the language from the provided list that is "
      "most appropriate and informative for answering the given question "
      "(e.g., because the question is about a culture, region, or source "
      "where that language is dominant, or because that language has the "
      "richest knowledge base for the topic).\n\n"
      "From the following languages:\n\n[" +
      list +
      "]\n\n, determine which one is the best expert language for answering "
      "the question below.\n\n"
      "Question: " +
      item.question +
      "\nFill out your language expert in the below JSON format:\n"
      "{\n \"expert_language\": \"<the expert language from the above "
      "list>\"\n}\n";
  return PromptText{std::move(body), {"expert_language"}, Language::kEn};
}

PromptText BuildTranslationPrompt(const std::string& text, Language target) {
  if (IsBlank(text)) {
    throw Error(ErrorKind::kInvalidArgument, "translation input is empty");
  }
  const std::string name(EnglishName(target));
  std::string body = "Translate ONLY the following question into " + name +
                     ": \"" + text +
                     "\".\n\n"
                     "ONLY output the translation in the following JSON "
                     "format:\n"
                     "{\n    \"" +
                     TranslationKey(target) +
                     "\": <output the translated input here>.\n}\n";
  return PromptText{std::move(body), {TranslationKey(target)}, target};
}

}  // namespace lsk
