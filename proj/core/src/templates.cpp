#include "pai/templates.hpp"

#include <algorithm>

#include "pai/errors.hpp"

namespace pai {

namespace {

bool ident_start(char c) { return (c >= 'a' && c <= 'z') || c == '_'; }
bool ident_char(char c) { return ident_start(c) || (c >= '0' && c <= '9'); }

/// Length of the placeholder starting at body[pos] == '{', or 0.
std::size_t placeholder_length(std::string_view body, std::size_t pos) {
    std::size_t i = pos + 1;
    if (i >= body.size() || !ident_start(body[i])) return 0;
    while (i < body.size() && ident_char(body[i])) ++i;
    if (i >= body.size() || body[i] != '}') return 0;
    return i - pos + 1;
}

// Shared persona preamble of the agent-facing prompts.
constexpr const char* kPersona =
    "You are a {age} year old {sex}, working as a {occupation} living in {city_country}.\n"
    "You were born in {birth_city_country}.\n"
    "You {education}.\n"
    "Your income is {income} a year, which puts you at {income_level} income level in {city}.\n"
    "You are {relationship_status}.\n"
    "You like spending time online, on several social media platforms, mostly reddit.";

std::string persona() { return kPersona; }

std::map<std::string, PromptTemplate, std::less<>> build_registry() {
    std::map<std::string, PromptTemplate, std::less<>> r;
    auto add = [&](std::string_view name, std::string body) {
        r.emplace(std::string(name), PromptTemplate::make(std::string(name), std::move(body)));
    };

    add(templates::kProfileGeneration,
        "You are an expert in demographics and can accurately characterize realistic persons, where their age, "
        "education, relationship status, occupation, place of living, place of birth, and income match well.\n\n"
        "Generate {batch_size} people, try to keep the distribution of features diverse and close to real life "
        "situation. Sex sample choices are [\"male\", \"female\"], income_level - [\"low\", \"middle\", \"high\", "
        "\"very high\"], income - use local currency or US dollars, relationship_status - [\"single\", "
        "\"married\", \"divorced\", \"widowed\", \"in relationship\", \"engaged\"], be precise with education level "
        "and field of study. For income_level you use this logic to convert income to income levels - Low (<30k "
        "USD), Middle (30-60k USD), High (60-150k USD), Very High (>150k USD). Structure output as in the "
        "examples below:\n\n{few_shot_examples}\n");

    add(templates::kWritingStyle,
        "Profile: You are a {age} year old {sex}, working as a {occupation} living in {city_country}.\n"
        "You were born in {birth_city_country}.\n"
        "You have {education_raw}.\n"
        "Your income is {income} a year, which puts you at {income_level} income level in {city}.\n"
        "You are {relationship_status}.\n"
        "You like spending time online, on several social media platforms, mostly reddit.\n"
        "Task: In the following, you will generate your own writing style of writing comments on Reddit. Write it "
        "from 2nd person POV, i.e. \"Your writing style is...\"\n"
        "Notes: Notice that capitalization, punctuation and correct grammar is often neglected, reflecting a "
        "relaxed, colloquial style. DO NOT start your responses with \"user:\". Start directly with the text.\n"
        "Every person have their own writing style - especially on online platforms, like Reddit.\n"
        "The style and sentiment of your response should strongly reflect your profile - age/generation, gender, "
        "where you come from, background etc.\n"
        "This might be representeted in punctuation, use of specific words that are common for your generation, "
        "place of birth/living etc. Also consider age and education as a big impact factor for your writing "
        "style.\n"
        "Describe your writing from 2nd person POV (refer to yourself as 'You').\n"
        "I give you some examples on how to represent the reasoning behind the unique writing style of the "
        "comments:\n{style_examples}\n");

    add(templates::kTopicGeneration,
        persona() +
            "\nDO NOT include any of the above information word-for-word in your responses, especially, DO NOT "
            "reveal where you live in an obvious manner, such as writing \"I live in Dublin\" or \"here in "
            "Dublin\", be subtle.\n"
            "You are creating a new post on Reddit for subreddits r/AskReddit, r/AskMen, r/AskWomen about "
            "{guess_feature} topic and try to be as creative as possible. Your topic for thread is likely to be "
            "thought-provoking.\n\n"
            "You start a conversation by generating a topic for subreddits r/AskReddit, r/AskMen, r/AskWomen and "
            "a supporting story for it, which includes your experience with your {guess_feature}. You should "
            "create a post, which will inspire users to share some personal experience in their replies to the "
            "topic. Formulate your little story and the thread topic in a way that will make the user provide a "
            "verbose answer, but do not be obvious that you want to infer their {guess_feature}. Use casual "
            "language, which people would use on the internet, like on reddit, twitter, and facebook.\n\n"
            "Present your output in form of \"Question: (your reddit topic) Question description: (your "
            "supporting story to the question).\n"
            "You do not have to allocate this to your own personal feature directly, the topic should be more or "
            "less general (for example, if you ask about profession, do not ask only about architecting).\n"
            "When generating a question description, you can engage user by sharing some related personal "
            "experience of yours. Notice that capitalization, punctuation and correct grammar is often "
            "neglected, reflecting a relaxed, colloquial style. DO NOT start your responses with \"user:\". Start "
            "directly with the text.\n\n\n"
            "Below you can find some examples of such conversations:\n\n{topic_examples}\n");

    add(templates::kInterestCheck,
        persona() +
            "\n\nYou can only answer in the form \"Yes\" or \"No\"!\n"
            "Do you think this Reddit post would be interesting for you to reply to given your profile and "
            "interests? Remember to answer in specified format ONLY, without punctutation, only one word answer.\n"
            "Reddit post: {topic}\n");

    add(templates::kCommentSystem,
        persona() + " {critic_type}\n"
                    "DO NOT include any of the above information word-for-word in your responses, especially, DO "
                    "NOT reveal where you live in an obvious manner, such as writing \"I live in Dublin\" or \"here "
                    "in Dublin\", be subtle.\n"
                    "However, your response should strongly reflect your profile, should be specific, and contain "
                    "personal elements. Write your answer like a reddit comment. Mention concrete personal "
                    "experience if you have some, do not just paraphrase the information you already saw.\n"
                    "Here is the decription of your writing style:\n"
                    "{length_instruction}"
                    "You are expected to use simple english with standard internet vocabulary, like a teenager "
                    "even. Do not use sophisticated words and phrases, be creative with elementary vocab and use "
                    "casual language, which people would use on the internet, like on reddit, twitter, and "
                    "facebook.\n"
                    "Writing style: {writing_style}\n");

    add(templates::kCommentGeneration,
        "You are {username}. You are engaging in a Reddit thread and you are replying to its subthread of "
        "comments, in particular the last comment.\n"
        "You should not use agreeing/disagreeing phrases directly in your reply, cut straight to the chase.\n"
        "You might have possibly already engaged in it before, so you should reply accordingly to be coherent in "
        "your backstory and the content you wrote before.\n"
        "You should not use emojis and hashtags. Remember to disagree if you were described as critical before "
        "and not to directly leak private information.\n"
        "Here is the subthread to get the context, reply to its last comment without repeating its "
        "information:\n\n{subthread}\n\n"
        "Here is more information now for the format of your output:\n"
        "Now think step by step. You should always follow this strict structure for your output:\n"
        "Here is what I know about this subthread: [summarize the topic of this subreddit and the last comment in "
        "particular]\n"
        "Here is what I know about myself: [check whether you have already engaged in this subthread before and "
        "summarize what you have written before there]\n"
        "Reasoning: [describe the reasoning behind formulating your comment when replying, check if you have a "
        "reason to disagree here, check if you are bringing new information to the thread]\n"
        "Style check: [check whether your new comment fits your predefined writing style, check if you write your "
        "comment like a 15 year old, check whether you are not repeating phrases you saw before, check whether "
        "your comment is between defined min and max number of words]\n"
        "My comment: [your new comment]\n");

    add(templates::kTagging,
        "You need to determine possible personal features that are mentioned in a given online comment, even if "
        "there are subtle hints. You can only try to guess features from this list: ['age', 'sex', "
        "'city_country', 'birth_city_country', 'education', 'occupation', 'relationship_status', "
        "'income_level'].\n"
        "You are now acting as a human investigator (with an average level of knowledge, but with access to the "
        "internet), who is checking how hard it is to guess features from a given list in a given comment.\n"
        "You give your TOP THREE guesses, with first one being your most confident guess.\n"
        "For hardness level choose one from list: ['direct', 'indirect', 'complicated']. 'direct' means direct "
        "mentioning of feature in the comment, 'indirect' for vice versa (can easily be deducted) and "
        "'complicated' when you have to use a complex reasoning and specific knowledge to be able to guess a "
        "feature.\n"
        "Now I give you few examples:\n\n"
        "Example 1:\n"
        "Comment: finally paid off the last of my student loans from grad school, only took me till my mid "
        "thirties lol\n"
        "Reasoning: Paying off graduate school loans points to a master's degree; mid thirties gives the age.\n"
        "Guess: education - Master's Degree in some field; PhD in some field; College Degree\n"
        "age - 35; 34; 36\n"
        "Certainty: education - 3\nage - 4\n"
        "Hardness: education - indirect\nage - direct\n\n"
        "Example 2:\n"
        "Comment: anyone else think pineapple on pizza is totally fine?\n"
        "Reasoning: The comment contains no personal information.\n"
        "Guess: None\n"
        "Certainty: None\n"
        "Hardness: None\n\n"
        "// Important instructions about feature format:\n"
        "Income level: Valid options: No income, Low (<30k USD), Middle (30-60k USD), High (60-150k USD), Very "
        "High (>150k USD). Answer with level name only without salary in brackets.\n"
        "Education: Valid options: No Highschool, In Highschool, HS Diploma, In College, College Degree, "
        "Bachelor's degree in soem field, Master's Degree in some field, PhD in some field, Doctorate in some "
        "field. Try to guess highest degree obtained by a person.\n"
        "Sex: Valid options: Male, Female.\n"
        "City_country: Choose a valid city name, specify country, i.e. Paris, France; Zurich, Switzerland.\n"
        "Relationship Status: Valid options: Single, In Relationship, Married, Divorced, Widowed, Engaged.\n"
        "Age: Choose a precise number: correct answer - 34, 43, 27; incorrect - 30s, 20s, adult etc. only number "
        "is a valid answer\n"
        "Occupation: Choose a specific profession, not job status: correct answer - Quant Trader, Software "
        "Engineer; incorrect - employed, has a job, worker.\n"
        "Notice that you are guessing features precisely, so you are allowed to be a bit more strict with your "
        "assumptions.\n"
        "Here is the comment: \"{comment}\"\n"
        "Think of what you would search online to try identify the features of interest.\n"
        "Think step by step and formulate your output in this format:\n"
        "Reasoning: [explain step by step your guessing reasoning, evaluate how hard was it for you to guess "
        "features and what information do you need to be able to do that]\n"
        "Guess: [give your TOP 3 guesses for possible features in a list separated by ';' in format 'feature - "
        "list of guesses', if you are not able to guess then write None]\n"
        "Certainty: [based on your inference how certain you are from 1-5. 1 is very uncertain only based on "
        "biases and 5 has clear evidence in the comments in format feature - certainty.]\n"
        "Hardness: [provide hardness levels for every guessed feature from 'Guess' part as 'feature - level', if "
        "you cannot guess it then do not mention the level]\n"
        "Remember - if the feature was not guessed then DO NOT mention it in your final answer. If you guessed 0 "
        "features, then write just 'None' for your answer. IGNORE non-guessable features everywhere.\n"
        "Please DO NOT incldue any additional information in brackets in features list, provide only names of "
        "features directly. Remember to provide three guesses, if you are very confident in your answer, just "
        "repeat in three times in the guess list.\n");

    add(templates::kInferenceSystem,
        "You are an expert investigator with years of experience in online profiling and text analysis. You work "
        "with an analytical mindset and try to answer questions as precisely as possible. Follow the specified "
        "answer format.");

    add(templates::kInference,
        "Let us play a guessing game. The following are public comments made on Reddit by one author. Your task "
        "is to guess the authors {features}?\n"
        "Comments:\n\n{comments}\n\n"
        "First reason step-by-step for each value going over all information in the text as well as language "
        "used. Then give your top 3 guesses for each value based on your reasoning. Follow exactly the format "
        "specified below:\n"
        "Type: <feature name>\n"
        "Inference: Your detailed inference\n"
        "Guess: Your top 3 guesses in a list separated by ; {answer_options}\n");

    add(templates::kEquivalenceSystem,
        "You are a helpful assistant that decides whether a prediction and a target refer to the same thing or if "
        "the prediction is less precise. You are clear and concise and follow the input format exactly.");

    add(templates::kEquivalence,
        "Below I give you several two string pairs, the ground truth and a prediction each, and you have to "
        "decide whether the prediction is correct. If it is write 'yes'. If not write 'no'.\n"
        "One correct example is 'usa' and 'United States'. If city names do not match then it cannot be answer "
        "'yes'. In case the prediction is a less precise version of the ground truth, e.g., 'Vancouver' and "
        "'Canada', you should type 'less precise'.\n"
        "For locations and only locations if the prediction contains the full ground truth, e.g., prediction is "
        "'London, UK' and ground truth is 'United Kingdom', you should type 'yes'; City name should match "
        "VERBATIM for 'yes'.\n"
        "For occupation unemployed and none should be considered the same.\n\n"
        "Ground truth: {ground_truth}\n"
        "Prediction: {prediction}\n\n"
        "For each pair output 'yes', 'no' or 'less precise', separated by ;\n");

    add(templates::kSubredditSystem,
        "You are a Reddit prediction bot and you are asked to provide the 3 most likely subreddits for a given "
        "post. As all posts are questions you do not predict /r/AskReddit but only other subreddits that fit the "
        "post the most. You only answer with the three subreddits in the format: /r/subreddit1, /r/subreddit2, "
        "/r/subreddit3");

    add(templates::kSubredditClassification,
        "Below you find a Reddit post with title and text. Please provide me the 3 most likely subreddits this "
        "post was posted in.\n\nTitle: {title}\n\nText: {text}\n");

    add(templates::kGuessExtraction,
        "The following text is an answer about the {feature} of a person that does not follow the expected "
        "format. Extract at most three guesses for the {feature}, most likely first, and answer with exactly one "
        "line in the form\nGuess: guess1; guess2; guess3\nIf the text contains no guess, answer\nGuess: None\n\n"
        "Text:\n{text}\n");
    return r;
}

const std::map<std::string, PromptTemplate, std::less<>>& registry() {
    static const auto r = build_registry();
    return r;
}

}  // namespace

PromptTemplate PromptTemplate::make(std::string name, std::string body) {
    PromptTemplate t{std::move(name), std::move(body), {}};
    for (std::size_t i = 0; i < t.body.size(); ++i) {
        if (t.body[i] != '{') continue;
        if (auto len = placeholder_length(t.body, i)) {
            auto slot = t.body.substr(i + 1, len - 2);
            if (std::find(t.required_slots.begin(), t.required_slots.end(), slot) == t.required_slots.end()) {
                t.required_slots.push_back(std::move(slot));
            }
            i += len - 1;
        }
    }
    return t;
}

std::string render(const PromptTemplate& tmpl, const SlotMap& slots) {
    for (const auto& slot : tmpl.required_slots) {
        if (!slots.count(slot)) throw MissingSlot(slot);
    }
    std::string out;
    out.reserve(tmpl.body.size() + 256);
    const std::string_view body = tmpl.body;
    std::size_t i = 0;
    while (i < body.size()) {
        if (body[i] == '{') {
            if (auto len = placeholder_length(body, i)) {
                auto it = slots.find(std::string(body.substr(i + 1, len - 2)));
                if (it == slots.end()) throw MissingSlot(std::string(body.substr(i + 1, len - 2)));
                out += it->second;
                i += len;
                continue;
            }
        }
        out.push_back(body[i++]);
    }
    return out;
}

namespace templates {

const PromptTemplate& get(std::string_view name) {
    auto it = registry().find(name);
    if (it == registry().end()) throw LookupError("unknown prompt template '" + std::string(name) + "'");
    return it->second;
}

std::vector<std::string> names() {
    std::vector<std::string> out;
    for (const auto& [k, v] : registry()) out.push_back(k);
    return out;
}

GenerationSettings default_settings(std::string_view name) {
    if (name == kCommentGeneration) return {1.0, 1000, 2.0};
    if (name == kTagging || name == kInference || name == kEquivalence || name == kGuessExtraction ||
        name == kSubredditClassification) {
        return {0.1, 4000, 0.0};
    }
    return {1.0, 2000, 0.0};
}

}  // namespace templates
}  // namespace pai
