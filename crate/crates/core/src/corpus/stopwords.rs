use std::collections::BTreeSet;

const ENGLISH: &str = "a about above after again against all am an and any are as at be because \
been before being below between both but by can could did do does doing down during each few for \
from further had has have having he her here hers herself him himself his how i if in into is it \
its itself just me more most my myself no nor not now of off on once only or other our ours \
ourselves out over own same she should so some such than that the their theirs them themselves \
then there these they this those through to too under until up very was we were what when where \
which while who whom why will with would you your yours yourself yourselves also it's i'm don't \
can't won't isn't aren't wasn't weren't hasn't haven't hadn't doesn't didn't shouldn't couldn't \
wouldn't let's that's there's what's who's";

/// Small bundled English stopword list.
pub fn default_stopwords() -> BTreeSet<String> {
    ENGLISH.split_whitespace().map(str::to_string).collect()
}

#[cfg(test)]
mod tests {
    #[test]
    fn list_is_reasonable() {
        let s = super::default_stopwords();
        assert!(s.len() > 140 && s.len() < 200, "{}", s.len());
        assert!(s.contains("the"));
    }
}
