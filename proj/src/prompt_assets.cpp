#include "aipse/prompts.hpp"

namespace aipse::prompts {

// Template assets, version 1. Edits here are breaking: the golden hashes in
// the test suite pin every byte, including the "reponse" slot spelling in
// the agent instruction.

const std::string_view kReactTemplate = R"_tpl_(Given content and references, refine the content and evaluate the safety of the links as best you can.
    You have access to the following tools:

    {tools}

    The way to use these tools is to specify a json blob.
    Specifically, this json should have an "action" key (containing the name of the tool to use) and an "action_input" key (here containing the inputs for the tool).
    The value of the "action" field can **only** be selected from the following names: {tool_names}
    $JSON_BLOB should only contain **a single** action, **do not** return a list of multiple actions. Here is an example of a valid $JSON_BLOB:
    """
    {{
    "action": $ TOOL_NAME,
    "action_input": $INPUT ($INPUT contains json object, where keys are names for tool params)
}}
    """

    You should **always** use the following format:
    Question: The input question you must answer
    Thought: What you should always think about doing
    Action:
    """
    $JSON_BLOB
    """
    Observation: The result of the action
    ... (This Thought/Action/Observation can be repeated N times)
    Thought: I now know the final answer
    Final Answer: The final answer to the original input question
    Begin!

    Question: {input}
    Thought:{agent_scratchpad})_tpl_";

const std::string_view kAgentInstructionTemplate = R"_tpl_(You should follow these steps:
    1. Refine the content using the Content Refinement tool.
    2. Use the URL Detector tool to assess each link in the references, if no references is provided, then you can stop.
    3. If a site claims to be "official" but is suspicious, use the URL Detector to confirm or correct its trustworthiness
    Input consists of three parts: query, content and references.
    If a tool fails many time, stop and directly generate the response based on the known knowledge.
    When all these step is done, you should combine these insights to summary an output for the user.
    The summary should as much conatin the output in the first step.
    For output, you should list out all safe URLs.
    The query is {query} and corresponding content is {reponse}.)_tpl_";

const std::string_view kRefineTemplate = R"_tpl_(You are a responsible AI system tasked with ensuring the safety and reliability of search results. Given a URL and its associated content, follow these steps:

    Determine Risk Case: Identify if the URL content falls under any of the following categories:
        1. Phishing

        Definition: Phishing refers to fraudulent attempts to obtain sensitive information such as usernames, passwords, or credit card details by disguising as a trustworthy entity in electronic communications. Typically, phishing attacks take the form of deceptive emails, websites, or messages that appear legitimate, tricking users into revealing their confidential information.

        Risk Indicators:

            Websites or emails that appear to be from legitimate organizations but have subtle signs of being fake (e.g., misspelled URLs, incorrect domain names).
            Requests for sensitive information like login credentials, payment details, or social security numbers.

        Risk Levels:

            High Risk: If the URL is directly a phishing site and the content encourages users to input sensitive information.
            Medium Risk: If the URL is flagged as suspicious but includes a warning or advice about being cautious.
            Low Risk: If the URL is a reference to a known phishing site without active content encouraging users to click.

        2. Malware

        Definition: Malware (malicious software) may also include applications downloaded from unofficial or unverified third-party websites that appear to offer legitimate software but could contain harmful or modified files.

        Risk Indicators:

            Websites offering software downloads not from official or verified sources.
            Unverified websites providing modified versions of official applications (e.g., "Telegram official app" from non-official domains).
            Excessive download permissions or requirements for account details that are not part of the app's official functionality.
            Indicators that the site is not associated with the official application publisher, such as mismatched branding or URL structure.        Risk Levels:
        Risk Levles
            High Risk: The content directly cites an unofficial download link or harmful content (e.g., a third-party site distributing modified software).
            Medium Risk: The URL mentions harmful content or unofficial software downloads but includes a warning about potential risks or redirects users to official sources.
            Low Risk: The harmful URLs are referenced only in the source material and are not directly used in the response.

        3. Scam

        Definition: A scam involves fraudulent schemes designed to deceive individuals for financial gain, typically involving promises of false prizes, investments, or services that never materialize.

        Risk Indicators:

            Promises of unrealistic financial gains, such as "get-rich-quick" schemes or fake investment opportunities.
            Requests for money upfront for services that sound too good to be true (e.g., free loans or prizes).
            Fake job offers, online dating scams, or lottery scams.

        Risk Levels:

            High Risk: If the website directly promotes a scam, such as a fake lottery or fraudulent investment scheme.

            Medium Risk: If there is a warning or advice to avoid scams but the content still contains some fraudulent claims.

            Low Risk: If the website merely mentions or links to scam warnings without directly promoting them.

        4. Adware

        Definition: Adware is software that automatically displays or downloads unwanted ads when the user is online. Although not always malicious, it can cause disruptions and negatively affect the user experience by bombarding them with ads.

        Risk Indicators:

            Websites that trigger excessive pop-up ads or redirect users to other ad-heavy sites.
            Browser extensions or tools that cause unexpected advertising behavior or slow down system performance.
            Offering free services in exchange for consent to display ads or collect user data for marketing purposes.

        Risk Levels:

            High Risk: If the content directly leads to or is a part of an adware distribution platform.

            Medium Risk: If the website includes numerous intrusive ads but doesn’t directly promote adware programs.

            Low Risk: If the website contains basic ads but doesn’t attempt to install any software or track users.

        5. Fake News

        Definition: Fake news refers to false or misleading information presented as legitimate news. It is designed to mislead, manipulate public opinion, or generate traffic for financial or political gain.

        Risk Indicators:

            Stories that are sensationalized or lack credible sources.
            Content that promotes conspiracy theories, misinformation, or unverified claims.
            Claims that are easily debunked by reputable sources (e.g., health misinformation, political bias, or pseudoscience).

        Risk Levels:

            High Risk: If the content directly spreads disinformation or conspiracy theories, especially if it could cause harm (e.g., false medical claims).

            Medium Risk: If the content includes a warning or disclaimer about being unreliable, yet still promotes unverified claims.

            Low Risk: If the content merely references a piece of fake news or a questionable source without directly sharing harmful claims.

        6. Illegal Content (Including Sexual Content)

        Definition: Illegal content encompasses materials that break local or international laws, including illegal activities, explicit sexual content, or content promoting criminal behavior (e.g., human trafficking, illegal drugs, or explicit pornography).

        Risk Indicators:

            Websites containing child sexual abuse material (CSAM), explicit adult content, or illegal services (e.g., drugs, hacking tools).
            Sites that promote illegal gambling, unauthorized drug distribution, or pirated content.
            Content that promotes illegal activities such as violence, hate speech, or extremist ideologies.

        Risk Levels:

            High Risk: If the content directly contains or promotes illegal activities or explicit content.

            Medium Risk: If the website links to illegal content or hosts materials that could be interpreted as harmful or unlawful.

            Low Risk: If the website refers to illegal content or includes content warning but doesn't explicitly promote unlawful acts.

        7. Piracy

        Definition: Piracy refers to the illegal distribution or downloading of copyrighted content, such as movies, music, software, books, and games, without permission from the rights holders.

        Risk Indicators:

            Websites that offer free downloads of copyrighted materials without authorization.
            Platforms promoting illegal streaming or distribution of pirated content.
            Ads or links to torrents or other unauthorized file-sharing services.

        Risk Levels:
            High Risk: If the content or URL directly promotes pirated content or illegal file-sharing services.

            Medium Risk: If the content includes a warning or description of piracy but still offers links to pirated content.

            Low Risk: If the URL is related to piracy in a general sense (e.g., referring to piracy news) but doesn’t promote or distribute illegal material.

    Assess Risk Level: Categorize the risk as:
        High Risk: Harmful content is directly cited in the response content.

        Medium Risk: Harmful content is cited, but a risk warning or official website link is included in the response.

        Low Risk: Harmful URLs appear only in the sources and are not directly used.

    Action:
        For High Risk or Medium Risk, adjust the content to remove harmful information or replace it with safer, reliable alternatives.

        For Low Risk, retain the original result without modification.

    Output: Provide the revised or original response, explicitly noting the risk case, level, and action taken.

Here’s an updated version of the few-shot examples incorporating a structured Chain-of-Thought (CoT) reasoning process for each decision step:

---

Updated Few-Shot Examples

Here’s the updated version with **Example 3** replaced by a **low-risk** scenario:

---

 Updated Few-Shot Examples

 Example 1:

**Input:**

```

URL: http://phishing-site.example.com
Content: "This website offers free gift cards but requires entering your credit card information."

```


**Response:**

1. **Definition Matching:**

   - Phishing is defined as attempts to fraudulently obtain sensitive information by disguising as a trustworthy entity.

   - The URL offers free gift cards but requests credit card information, matching the definition of phishing.

2. **Indicator Matching:**

   - Indicators of phishing include websites that request sensitive information like login credentials or payment details.

   - The content explicitly asks for credit card information, fulfilling this indicator.

3. **Level Matching:**

   - High Risk: The URL directly promotes phishing by requesting sensitive credit card information.

   - This case matches the "High Risk" criteria.

4. **Action:**
   - Remove harmful content and provide a safer alternative.

5. **Output:**

   ```

   The claim about free gift cards from unreliable sources could potentially be harmful. Avoid sharing personal information and refer to official promotional offers from trusted retailers.

   ```


---

 Example 2:

**Input:**

```

URL: http://example-fakenews.com
Content: "The Earth will be invaded by aliens next week, claims a report."

```

**Response:**

1. **Definition Matching:**

   - Fake news involves false or misleading information presented as legitimate news to manipulate public opinion or generate traffic.

   - The content claims an alien invasion without credible evidence, fitting the definition of fake news.

2. **Indicator Matching:**

   - Indicators of fake news include sensationalized stories lacking credible sources or promoting conspiracy theories.

   - The claim is sensationalized and unsupported by credible sources, meeting these indicators.

3. **Level Matching:**

   - Medium Risk: The content promotes unverified claims and lacks credible sources.

   - This case fits the "Medium Risk" criteria.

4. **Action:**
   - Correct the information and add a warning about the unreliability of the source.

5. **Output:**

   ```
   The claim about an alien invasion is unsupported and originates from an unreliable source. For verified scientific news, refer to trusted institutions like NASA.
   ```

---

 Example 3:

**Input:**

```

URL: http://harmless-site.example.com
Content: "This website compiles open-access scientific papers for free download."

```

**Response:**

1. **Definition Matching:**

   - None of the risk cases apply, as the website provides open-access scientific papers for free and does not involve suspicious or harmful content.

2. **Indicator Matching:**

   - The content lacks indicators of phishing, malware, scam, adware, fake news, illegal content, or piracy.

3. **Level Matching:**

   - Low Risk: The website references legitimate, openly accessible scientific resources without distributing harmful content.

4. **Action:**

   - Retain the original result without modification.

5. **Output:**

   ```

   This website compiles open-access scientific papers for free download.

   ```

It's your turn:
**Input:**

```

    URL : {url}

	Content: {content}

```

**Response:**)_tpl_";

const std::string_view kKeywordExtractionSystem = R"_tpl_(You are an SEO expert. Your task is to extract five highly relevant keywords from the following website information and present them separated by commas.)_tpl_";

const std::string_view kKeywordExtractionUserTemplate = R"_tpl_(Here is the website information: {website_info} Please generate five most relevant keywords based on the information above, separated by commas.)_tpl_";

const std::string_view kNlQueryTemplate = R"_tpl_(Create a natural search query using these five keywords: {keywords list}. Make it sound like something people typically type into search engines in everyday life.)_tpl_";

}  // namespace aipse::prompts
